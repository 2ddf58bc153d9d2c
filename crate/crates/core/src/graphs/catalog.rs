//! Standard small graphs. External labels are `p1, p2, ...`, edges `e1, e2, ...`.

use super::FeynmanGraph;
use crate::error::Result;

/// Builds a graph from `(id, a, b, massive)` edges and `(vertex, label)` externals.
pub fn from_lists(
    edges: &[(&str, &str, &str, bool)],
    external: &[(&str, &str)],
) -> Result<FeynmanGraph> {
    let mut names: Vec<&str> = Vec::new();
    for &(_, a, b, _) in edges {
        for v in [a, b] {
            if !names.contains(&v) {
                names.push(v);
            }
        }
    }
    for &(v, _) in external {
        if !names.contains(&v) {
            names.push(v);
        }
    }
    let mut g = FeynmanGraph::new(names)?;
    for &(id, a, b, m) in edges {
        g.add_edge(id, a, b, m)?;
    }
    for &(v, l) in external {
        g.add_external(v, l)?;
    }
    Ok(g)
}

fn build(edges: &[(&str, &str, &str, bool)], external: &[(&str, &str)]) -> FeynmanGraph {
    from_lists(edges, external).expect("catalog graphs are valid")
}

/// One-loop propagator correction with optional masses.
pub fn bubble(m1: bool, m2: bool) -> FeynmanGraph {
    build(
        &[("e1", "v1", "v2", m1), ("e2", "v1", "v2", m2)],
        &[("v1", "p1"), ("v2", "p2")],
    )
}

/// Three parallel edges between two external vertices.
pub fn sunrise(masses: [bool; 3]) -> FeynmanGraph {
    build(
        &[
            ("e1", "v1", "v2", masses[0]),
            ("e2", "v1", "v2", masses[1]),
            ("e3", "v1", "v2", masses[2]),
        ],
        &[("v1", "p1"), ("v2", "p2")],
    )
}

/// Three parallel edges, no external vertices.
pub fn vacuum_sunrise(masses: [bool; 3]) -> FeynmanGraph {
    build(
        &[
            ("e1", "v1", "v2", masses[0]),
            ("e2", "v1", "v2", masses[1]),
            ("e3", "v1", "v2", masses[2]),
        ],
        &[],
    )
}

pub fn triangle(masses: [bool; 3]) -> FeynmanGraph {
    build(
        &[
            ("e1", "v2", "v3", masses[0]),
            ("e2", "v3", "v1", masses[1]),
            ("e3", "v1", "v2", masses[2]),
        ],
        &[("v1", "p1"), ("v2", "p2"), ("v3", "p3")],
    )
}

pub fn box_graph() -> FeynmanGraph {
    build(
        &[
            ("e1", "v1", "v2", false),
            ("e2", "v2", "v3", false),
            ("e3", "v3", "v4", false),
            ("e4", "v4", "v1", false),
        ],
        &[("v1", "p1"), ("v2", "p2"), ("v3", "p3"), ("v4", "p4")],
    )
}

/// Single self-loop without external vertices.
pub fn tadpole(massive: bool) -> FeynmanGraph {
    build(&[("e1", "v1", "v1", massive)], &[])
}

/// Two bubbles in series between the external vertices.
pub fn bubble_chain() -> FeynmanGraph {
    build(
        &[
            ("e1", "v1", "v2", false),
            ("e2", "v1", "v2", false),
            ("e3", "v2", "v3", false),
            ("e4", "v2", "v3", false),
        ],
        &[("v1", "p1"), ("v3", "p2")],
    )
}

/// Massless bubble with a massless self-loop attached at `v1`.
pub fn bubble_with_tadpole() -> FeynmanGraph {
    build(
        &[
            ("e1", "v1", "v2", false),
            ("e2", "v1", "v2", false),
            ("e3", "v1", "v1", false),
        ],
        &[("v1", "p1"), ("v2", "p2")],
    )
}

/// Two-loop propagator with a vertex correction (five edges).
pub fn kite() -> FeynmanGraph {
    build(
        &[
            ("e1", "v1", "v2", false),
            ("e2", "v1", "v3", false),
            ("e3", "v2", "v3", false),
            ("e4", "v2", "v4", false),
            ("e5", "v3", "v4", false),
        ],
        &[("v1", "p1"), ("v4", "p2")],
    )
}

/// Two-loop massive vacuum graph with three edges.
pub fn massive_vacuum_sunrise() -> FeynmanGraph {
    vacuum_sunrise([true, true, true])
}

/// Named corpus used by tests and examples.
pub fn corpus() -> Vec<(&'static str, FeynmanGraph)> {
    vec![
        ("bubble", bubble(false, false)),
        ("bubble_m1", bubble(true, false)),
        ("bubble_mm", bubble(true, true)),
        ("sunrise", sunrise([false; 3])),
        ("sunrise_m", sunrise([true, true, true])),
        ("sunrise_m1", sunrise([true, false, false])),
        ("vacuum_sunrise_m", massive_vacuum_sunrise()),
        ("vacuum_sunrise_m1", vacuum_sunrise([true, false, false])),
        ("triangle", triangle([false; 3])),
        ("triangle_m", triangle([true, false, true])),
        ("box", box_graph()),
        ("tadpole_m", tadpole(true)),
        ("bubble_chain", bubble_chain()),
        ("bubble_with_tadpole", bubble_with_tadpole()),
        ("kite", kite()),
    ]
}
