//! Bundled example sources, parsed from the JSON files under `data/`.

use crate::source::{load_source, HypergraphSource};

pub const MOTIVATING_JSON: &str = include_str!("../../../data/motivating.json");
pub const TRIANGLE_JSON: &str = include_str!("../../../data/triangle.json");
pub const THREE_USER_HYPEREDGE_JSON: &str = include_str!("../../../data/three_user_hyperedge.json");
pub const SIX_USER_JSON: &str = include_str!("../../../data/six_user.json");
pub const TREE_PIN4_JSON: &str = include_str!("../../../data/tree_pin4.json");

/// Path graph 1–2–3 with one edge on {1,2} and two parallel unit edges on {2,3}.
pub fn motivating() -> HypergraphSource {
    load_source(MOTIVATING_JSON).expect("bundled source")
}

/// Unit-entropy triangle on three vertices.
pub fn triangle() -> HypergraphSource {
    load_source(TRIANGLE_JSON).expect("bundled source")
}

/// Three users with a hyperedge covering all of them.
pub fn three_user_hyperedge() -> HypergraphSource {
    load_source(THREE_USER_HYPEREDGE_JSON).expect("bundled source")
}

/// Six users, four unit hyperedges.
pub fn six_user() -> HypergraphSource {
    load_source(SIX_USER_JSON).expect("bundled source")
}

/// Path 1–2–3–4 with a doubled middle edge.
pub fn tree_pin4() -> HypergraphSource {
    load_source(TREE_PIN4_JSON).expect("bundled source")
}

pub fn all() -> Vec<(&'static str, HypergraphSource)> {
    vec![
        ("motivating", motivating()),
        ("triangle", triangle()),
        ("three_user_hyperedge", three_user_hyperedge()),
        ("six_user", six_user()),
        ("tree_pin4", tree_pin4()),
    ]
}
