pub mod syntax;
pub mod coding;
pub mod gl;
pub mod kernel;
pub mod report;
pub mod text;
pub mod meta;
pub mod corpus;
pub mod cli;
