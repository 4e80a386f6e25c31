pub mod catalog;
pub mod classify;
pub mod derivations;
pub mod flow;
pub mod format;
pub mod killing;
pub mod liealg;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod tensor;
