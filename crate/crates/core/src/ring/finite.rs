//! Index-level view of a finite ring.
//!
//! Elements are addressed by their position in canonical enumeration order.
//! Rings up to [`TABLE_CACHE_LIMIT`] elements get full Cayley tables, built
//! once on first use; larger rings decode, operate and re-encode.

use super::{Element, Ring};
use crate::par;

/// Rings at most this large get cached Cayley tables (a 1024-element ring
/// costs two 4 MiB tables).
pub const TABLE_CACHE_LIMIT: usize = 1024;

pub(crate) struct Tables {
    size: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    star: Vec<u32>,
}

impl Tables {
    pub(crate) fn build(ring: &Ring, size: usize) -> Tables {
        let elems: Vec<Element> = (0..size).map(|i| ring.decode_index(i)).collect();
        let pairwise = |op: &(dyn Fn(&Element, &Element) -> Element + Sync)| -> Vec<u32> {
            par::map(size * size, |k| ring.encode_index(&op(&elems[k / size], &elems[k % size])) as u32)
        };
        let add = pairwise(&|x, y| ring.add(x, y));
        let mul = pairwise(&|x, y| ring.mul(x, y));
        let neg = elems.iter().map(|x| ring.encode_index(&ring.neg(x)) as u32).collect();
        let star = elems.iter().map(|x| ring.encode_index(&ring.star(x)) as u32).collect();
        Tables { size, add, mul, neg, star }
    }
}

/// Borrowed index-level view; see [`Ring::finite`].
#[derive(Clone, Copy)]
pub struct Finite<'r> {
    ring: &'r Ring,
    size: usize,
    tables: Option<&'r Tables>,
}

impl<'r> Finite<'r> {
    pub(crate) fn new(ring: &'r Ring, size: usize, tables: Option<&'r Tables>) -> Self {
        Finite { ring, size, tables }
    }

    pub fn ring(&self) -> &'r Ring {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn element(&self, i: usize) -> Element {
        self.ring.decode_index(i)
    }

    pub fn index(&self, e: &Element) -> usize {
        self.ring.encode_index(e)
    }

    pub fn zero(&self) -> usize {
        self.index(&self.ring.zero())
    }

    pub fn one(&self) -> usize {
        self.index(&self.ring.one())
    }

    #[inline]
    pub fn add(&self, i: usize, j: usize) -> usize {
        match self.tables {
            Some(t) => t.add[i * t.size + j] as usize,
            None => self.index(&self.ring.add(&self.element(i), &self.element(j))),
        }
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        match self.tables {
            Some(t) => t.mul[i * t.size + j] as usize,
            None => self.index(&self.ring.mul(&self.element(i), &self.element(j))),
        }
    }

    #[inline]
    pub fn neg(&self, i: usize) -> usize {
        match self.tables {
            Some(t) => t.neg[i] as usize,
            None => self.index(&self.ring.neg(&self.element(i))),
        }
    }

    #[inline]
    pub fn star(&self, i: usize) -> usize {
        match self.tables {
            Some(t) => t.star[i] as usize,
            None => self.index(&self.ring.star(&self.element(i))),
        }
    }

    #[inline]
    pub fn sub(&self, i: usize, j: usize) -> usize {
        self.add(i, self.neg(j))
    }

    /// `i · j · k`
    #[inline]
    pub fn mul3(&self, i: usize, j: usize, k: usize) -> usize {
        self.mul(self.mul(i, j), k)
    }

    /// All elements, in canonical order.
    pub fn elements(&self) -> Vec<Element> {
        (0..self.size).map(|i| self.element(i)).collect()
    }
}
