//! Shared graph corpus for the integration suites: named classical
//! configurations plus deterministic pseudo-random trees.

use std::fmt::Write as _;

use resgraph::ResolutionGraph;

pub fn graph(text: &str) -> ResolutionGraph {
    ResolutionGraph::parse(text).unwrap_or_else(|e| panic!("corpus graph must parse: {e}\n{text}"))
}

/// Genus-1 curve of self-intersection -1 followed by two -2 curves.
pub fn genus1_chain() -> ResolutionGraph {
    graph("vertex A0 e=-1 g=1\nvertex A1 e=-2\nvertex A2 e=-2\nedge A0 A1\nedge A1 A2\n")
}

/// Cuspidal rational -1 curve with a tail of `m` smooth rational -2
/// curves; the elliptic sequence has exactly m + 1 members.
pub fn cusp_chain(m: usize) -> ResolutionGraph {
    let mut text = String::from("vertex v0 e=-1 cusps=1\n");
    for i in 1..=m {
        let _ = writeln!(text, "vertex v{i} e=-2");
    }
    for i in 1..=m {
        let _ = writeln!(text, "edge v{} v{i}", i - 1);
    }
    graph(&text)
}

/// Single cuspidal rational curve; minimally elliptic for every e <= -1.
pub fn cuspidal(e: i64) -> ResolutionGraph {
    graph(&format!("vertex a e={e} cusps=1\n"))
}

/// Single smooth genus-1 curve; minimally elliptic for every e <= -1.
pub fn smooth_elliptic(e: i64) -> ResolutionGraph {
    graph(&format!("vertex a e={e} g=1\n"))
}

/// Chain of n smooth rational -2 curves.
pub fn a_n(n: usize) -> ResolutionGraph {
    assert!(n >= 1);
    let mut text = String::new();
    for i in 0..n {
        let _ = writeln!(text, "vertex c{i} e=-2");
    }
    for i in 1..n {
        let _ = writeln!(text, "edge c{} c{i}", i - 1);
    }
    graph(&text)
}

/// Chain of n - 2 curves with two extra leaves at the last chain vertex;
/// all -2. n >= 4.
pub fn d_n(n: usize) -> ResolutionGraph {
    assert!(n >= 4);
    let mut text = String::new();
    for i in 0..n - 2 {
        let _ = writeln!(text, "vertex c{i} e=-2");
    }
    let _ = writeln!(text, "vertex f1 e=-2\nvertex f2 e=-2");
    for i in 1..n - 2 {
        let _ = writeln!(text, "edge c{} c{i}", i - 1);
    }
    let _ = writeln!(text, "edge c{} f1\nedge c{} f2", n - 3, n - 3);
    graph(&text)
}

/// Chain of n - 1 curves with one branch curve at the third chain vertex;
/// all -2. n in 6..=8.
pub fn e_n(n: usize) -> ResolutionGraph {
    assert!((6..=8).contains(&n));
    let mut text = String::new();
    for i in 0..n - 1 {
        let _ = writeln!(text, "vertex c{i} e=-2");
    }
    let _ = writeln!(text, "vertex b e=-2");
    for i in 1..n - 1 {
        let _ = writeln!(text, "edge c{} c{i}", i - 1);
    }
    let _ = writeln!(text, "edge c2 b");
    graph(&text)
}

/// -3 center with three -2 leaves: rational, not numerically Gorenstein.
pub fn star_minus3() -> ResolutionGraph {
    graph(
        "vertex c e=-3\nvertex l1 e=-2\nvertex l2 e=-2\nvertex l3 e=-2\n\
         edge c l1\nedge c l2\nedge c l3\n",
    )
}

/// Triangle of -3 curves: minimally elliptic with a cycle in the dual
/// graph, so H1 of the link does not vanish.
pub fn triangle() -> ResolutionGraph {
    graph(
        "vertex a e=-3\nvertex b e=-3\nvertex c e=-3\n\
         edge a b\nedge b c\nedge a c\n",
    )
}

/// Elliptic but not numerically Gorenstein.
pub fn non_ng_elliptic() -> ResolutionGraph {
    graph("vertex a e=-2 g=1\nvertex b e=-3\nedge a b\n")
}

/// Genus-2 curve: chi(Z_num) = -1, outside the rational/elliptic theory.
pub fn genus2() -> ResolutionGraph {
    graph("vertex a e=-1 g=2\n")
}

/// splitmix64; deterministic across platforms and releases.
pub struct Rng(pub u64);

impl Rng {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Random tree on 2..=8 vertices with weights in -5..=-2 and occasional
/// genus, cusp, or node decorations. May fail validation (for instance a
/// -2 vertex acquiring four -2 neighbors goes semidefinite).
pub fn random_tree(seed: u64) -> ResolutionGraph {
    let mut rng = Rng(seed);
    let n = 2 + rng.below(7) as usize;
    let mut text = String::new();
    for i in 0..n {
        let e = -(2 + rng.below(4) as i64);
        let extra = match rng.below(12) {
            0 => " g=1",
            1 => " cusps=1",
            2 => " nodes=1",
            _ => "",
        };
        let _ = writeln!(text, "vertex v{i} e={e}{extra}");
    }
    for i in 1..n {
        let p = rng.below(i as u64) as usize;
        let _ = writeln!(text, "edge v{p} v{i}");
    }
    graph(&text)
}

pub fn random_valid_trees(count: usize) -> Vec<(String, ResolutionGraph)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let g = random_tree(seed);
        if g.validate().is_valid() {
            out.push((format!("random_tree_{seed}"), g));
        }
        seed += 1;
    }
    out
}

/// The full equivalence corpus: every classical family plus random trees.
pub fn corpus() -> Vec<(String, ResolutionGraph)> {
    let mut out: Vec<(String, ResolutionGraph)> = Vec::new();
    out.push(("genus1_chain".into(), genus1_chain()));
    for m in 0..=4 {
        out.push((format!("cusp_chain_{m}"), cusp_chain(m)));
    }
    for e in 1..=5 {
        out.push((format!("cuspidal_minus{e}"), cuspidal(-e)));
    }
    for e in 1..=3 {
        out.push((format!("smooth_elliptic_minus{e}"), smooth_elliptic(-e)));
    }
    for n in 1..=8 {
        out.push((format!("a{n}"), a_n(n)));
    }
    for n in 4..=8 {
        out.push((format!("d{n}"), d_n(n)));
    }
    for n in 6..=8 {
        out.push((format!("e{n}"), e_n(n)));
    }
    out.push(("star_minus3".into(), star_minus3()));
    out.push(("triangle".into(), triangle()));
    out.push(("non_ng_elliptic".into(), non_ng_elliptic()));
    out.push(("genus2".into(), genus2()));
    out.extend(random_valid_trees(10));
    out
}
