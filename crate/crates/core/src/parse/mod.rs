//! Textual case format (`.acd`), bundle manifests (`.acb`) and the
//! pretty-printer.

mod lexer;
mod parser;
mod print;

pub use parser::{
    parse_bundle, parse_case, parse_manifest, BundleParse, Manifest, ManifestEntry, ParseResult,
    Slot, SourceFile,
};
pub use print::print_case;
