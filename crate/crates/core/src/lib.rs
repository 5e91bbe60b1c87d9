pub mod epc;
pub mod field;
pub mod gpc;
pub mod linalg;
pub mod oracle;
