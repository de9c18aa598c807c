pub mod corpus;
pub mod engine;
pub mod linalg;
pub mod oracle;
pub mod par;
pub mod ring;
