pub mod commands;
pub mod figures;
pub mod format;
pub mod spec_text;
pub mod validate;
