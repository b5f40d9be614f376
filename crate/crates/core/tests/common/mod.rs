#![allow(dead_code)]

use std::path::PathBuf;

use acsplit_core::parse::BundleParse;
use acsplit_core::{parse_bundle, parse_case, AssuranceCase, Bundle, SourceFile};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_text(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn corpus_case(name: &str) -> AssuranceCase {
    let parsed = parse_case(&corpus_text(name), name);
    assert!(parsed.diagnostics.is_empty(), "{name}: {:?}", parsed.diagnostics);
    parsed.case.unwrap()
}

pub fn corpus_bundle_parse(name: &str) -> BundleParse {
    parse_bundle(&corpus_text(name), name, |path| {
        std::fs::read_to_string(corpus_dir().join(path))
            .map(|text| SourceFile { name: path.to_string(), text })
            .map_err(|e| e.to_string())
    })
}

pub fn corpus_bundle(name: &str) -> Bundle {
    let parsed = corpus_bundle_parse(name);
    assert!(parsed.diagnostics.is_empty(), "{name}: {:?}", parsed.diagnostics);
    parsed.bundle.unwrap()
}

pub fn eid(s: &str) -> acsplit_core::ElementId {
    s.parse().unwrap()
}

pub fn cid(s: &str) -> acsplit_core::CaseId {
    s.parse().unwrap()
}
