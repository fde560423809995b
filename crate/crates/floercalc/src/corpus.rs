//! The bundled knot complexes.

use crate::cfk::CfkComplex;
use crate::error::SchemaError;
use crate::io;

/// `(file stem, JSON)` for every bundled complex, in a fixed order.
pub const BUNDLED: [(&str, &str); 7] = [
    ("unknot", include_str!("../corpus/unknot.json")),
    ("trefoil_rh", include_str!("../corpus/trefoil_rh.json")),
    ("trefoil_lh", include_str!("../corpus/trefoil_lh.json")),
    ("figure8", include_str!("../corpus/figure8.json")),
    ("t25", include_str!("../corpus/t25.json")),
    ("t27", include_str!("../corpus/t27.json")),
    ("t34_mirror", include_str!("../corpus/t34_mirror.json")),
];

/// Parses one bundled complex by stem (with or without `.json`).
pub fn load(name: &str) -> Option<Result<CfkComplex, SchemaError>> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED.iter().find(|(s, _)| *s == stem).map(|(_, json)| io::parse_cfk(json))
}

/// Every bundled complex, parsed.
pub fn all() -> Vec<CfkComplex> {
    BUNDLED
        .iter()
        .map(|(stem, json)| io::parse_cfk(json).unwrap_or_else(|e| panic!("bundled `{stem}` is malformed: {e}")))
        .collect()
}
