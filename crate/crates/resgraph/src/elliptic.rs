//! The elliptic sequence and the structure theory of elliptic graphs.
//!
//! On a numerically Gorenstein elliptic graph the canonical cycle decomposes
//! as a sum of fundamental cycles over a strictly shrinking tower of
//! connected supports. The last summand is the minimally elliptic cycle E.
//! The constructor asserts the full list of structural identities the
//! decomposition is known to satisfy, so a sequence value can be trusted
//! downstream without re-checking.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cycle::{canonical_cycle, euler_char, fundamental_cycle, Cycle};
use crate::graph::{IntersectionForm, ResolutionGraph};
use crate::oracle;
use crate::{Error, Result};

/// One level of the tower: a connected support and its fundamental cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceMember {
    pub support: BTreeSet<usize>,
    pub cycle: Cycle,
}

/// The tower Z_{B_0} >= Z_{B_1} >= ... >= Z_{B_m} = E with
/// Z_K = sum of all members. `partial_sum(t)` is the sum of members 0..=t,
/// `tail_sum(t)` the sum of members t..=m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticSequence {
    members: Vec<SequenceMember>,
    partial: Vec<Cycle>,
    tails: Vec<Cycle>,
    z_k: Cycle,
}

impl EllipticSequence {
    /// m, the number of steps after the first; the sequence has m+1 members.
    pub fn m(&self) -> usize {
        self.members.len() - 1
    }

    pub fn members(&self) -> &[SequenceMember] {
        &self.members
    }

    /// Z_num, the fundamental cycle of the whole graph.
    pub fn fundamental(&self) -> &Cycle {
        &self.members[0].cycle
    }

    /// E, the minimally elliptic cycle.
    pub fn minimally_elliptic(&self) -> &Cycle {
        &self.members[self.members.len() - 1].cycle
    }

    pub fn partial_sum(&self, t: usize) -> &Cycle {
        &self.partial[t]
    }

    pub fn tail_sum(&self, t: usize) -> &Cycle {
        &self.tails[t]
    }

    pub fn z_k(&self) -> &Cycle {
        &self.z_k
    }
}

/// Builds the elliptic sequence. Refuses (by named hypothesis) unless the
/// graph is numerically Gorenstein with nonzero canonical cycle and
/// chi(Z_num) = 0. Every structural identity of the tower is asserted; a
/// failure surfaces as an internal error, never as a wrong answer.
pub fn elliptic_sequence(graph: &ResolutionGraph) -> Result<EllipticSequence> {
    let form = graph.intersection_form();
    let (zk_rational, integral) = canonical_cycle(graph)?;
    if !integral {
        return Err(Error::Hypothesis(format!(
            "graph is not numerically Gorenstein (canonical cycle {zk_rational})"
        )));
    }
    let z_k = zk_rational.to_integer().expect("checked integral");
    if z_k.is_zero() {
        return Err(Error::Hypothesis(
            "canonical cycle is zero (Du Val graph); the elliptic sequence needs Z_K != 0".into(),
        ));
    }
    let (z_num, _) = fundamental_cycle(graph, &graph.full_support())?;
    let chi = euler_char(&form, &z_num);
    if !chi.is_zero() {
        return Err(Error::Hypothesis(format!(
            "graph is not elliptic: chi(Z_num) = {chi}"
        )));
    }

    let mut members = vec![SequenceMember {
        support: graph.full_support(),
        cycle: z_num,
    }];
    loop {
        let sum = members
            .iter()
            .fold(Cycle::zero(graph.vertex_count()), |acc, m| &acc + &m.cycle);
        let rest = &z_k - &sum;
        if rest.is_zero() {
            break;
        }
        if !rest.is_positive() {
            return Err(Error::Internal(format!(
                "Z_K minus the partial sum is {rest}, neither zero nor positive"
            )));
        }
        let support = rest.support();
        if !graph.is_connected_subset(&support) {
            return Err(Error::Internal(
                "support of the next sequence member is not connected".into(),
            ));
        }
        let prev_support = &members.last().expect("nonempty").support;
        if !(support.is_subset(prev_support) && support != *prev_support) {
            return Err(Error::Internal(
                "sequence supports must shrink strictly".into(),
            ));
        }
        let (cycle, _) = fundamental_cycle(graph, &support)?;
        members.push(SequenceMember { support, cycle });
    }

    let partial: Vec<Cycle> = members
        .iter()
        .scan(Cycle::zero(graph.vertex_count()), |acc, m| {
            *acc = &*acc + &m.cycle;
            Some(acc.clone())
        })
        .collect();
    let mut tails: Vec<Cycle> = Vec::new();
    let mut acc = Cycle::zero(graph.vertex_count());
    for m in members.iter().rev() {
        acc = &acc + &m.cycle;
        tails.push(acc.clone());
    }
    tails.reverse();

    let seq = EllipticSequence {
        members,
        partial,
        tails,
        z_k,
    };
    assert_tower_identities(graph, &form, &seq)?;
    Ok(seq)
}

/// The identities the tower must satisfy. Kept separate so tests can call it
/// on a sequence directly.
pub fn assert_tower_identities(
    graph: &ResolutionGraph,
    form: &IntersectionForm,
    seq: &EllipticSequence,
) -> Result<()> {
    let fail = |msg: String| Err(Error::Internal(msg));
    let m = seq.m();
    let members = seq.members();

    // Last member is exactly what remains of Z_K.
    if seq.partial_sum(m) != seq.z_k() {
        return fail("members do not sum to the canonical cycle".into());
    }
    for j in 0..m {
        // Cycles shrink pointwise along the tower.
        if !members[j + 1].cycle.le(&members[j].cycle) {
            return fail(format!("member {} does not dominate member {}", j, j + 1));
        }
        // Curves of the next support do not meet the current cycle.
        for &i in &members[j + 1].support {
            if !form.row_dot(i, &members[j].cycle).is_zero() {
                return fail(format!(
                    "vertex {i} of support {} meets cycle {} nontrivially",
                    j + 1,
                    j
                ));
            }
        }
    }
    // Distinct members are orthogonal.
    for i in 0..=m {
        for j in i + 1..=m {
            if !form.pairing(&members[i].cycle, &members[j].cycle).is_zero() {
                return fail(format!("members {i} and {j} are not orthogonal"));
            }
        }
    }
    for (t, member) in members.iter().enumerate() {
        // Partial sums stay anti-nef.
        for i in 0..graph.vertex_count() {
            if form.row_dot(i, seq.partial_sum(t)).is_positive() {
                return fail(format!("partial sum {t} meets vertex {i} positively"));
            }
        }
        // On the t-th support the tail sum looks like Z_K.
        for &i in &member.support {
            if form.row_dot(i, seq.tail_sum(t)) != form.row_dot(i, seq.z_k()) {
                return fail(format!("tail sum {t} and Z_K differ against vertex {i}"));
            }
        }
        // Members, partial sums and tail sums all have chi = 0.
        for (what, cycle) in [
            ("member", &member.cycle),
            ("partial sum", seq.partial_sum(t)),
            ("tail sum", seq.tail_sum(t)),
        ] {
            if !euler_char(form, cycle).is_zero() {
                return fail(format!("{what} {t} has nonzero chi"));
            }
        }
    }
    Ok(())
}

/// E, the unique cycle with chi(E) = 0 that is chi-minimal among its
/// sub-cycles. Computed through the elliptic sequence, so the graph must be
/// numerically Gorenstein; the brute-force search in [`crate::oracle`] has
/// no such restriction.
pub fn minimally_elliptic_cycle(graph: &ResolutionGraph) -> Result<Cycle> {
    Ok(elliptic_sequence(graph)?.minimally_elliptic().clone())
}

/// The two possible shapes of an elliptic graph's curve list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureVerdict {
    /// Exactly one curve with chi(A_i) = 0 (genus one and smooth, or
    /// rational with one node or cusp); every other curve smooth rational.
    /// That curve alone carries the minimally elliptic cycle.
    SingleNonRationalCurve { vertex: usize },
    /// Every curve smooth rational.
    AllSmoothRational,
}

/// Classifies the curves of an elliptic graph into the only two shapes the
/// theory allows, and checks that every connected piece of the complement of
/// |E| would be rational on its own (fundamental cycle with chi = 1).
pub fn exceptional_curve_structure(graph: &ResolutionGraph) -> Result<StructureVerdict> {
    let form = graph.intersection_form();
    let (z_num, _) = fundamental_cycle(graph, &graph.full_support())?;
    let chi = euler_char(&form, &z_num);
    if !chi.is_zero() {
        return Err(Error::Hypothesis(format!(
            "graph is not elliptic: chi(Z_num) = {chi}"
        )));
    }

    let mut chi_zero: Vec<usize> = Vec::new();
    for (i, v) in graph.vertices().iter().enumerate() {
        match v.curve_chi() {
            1 => {}
            0 => chi_zero.push(i),
            _ => {
                return Err(Error::Internal(format!(
                    "vertex `{}` has curve chi {} on an elliptic graph",
                    v.name,
                    v.curve_chi()
                )))
            }
        }
    }
    let verdict = match chi_zero.as_slice() {
        [] => StructureVerdict::AllSmoothRational,
        [v] => StructureVerdict::SingleNonRationalCurve { vertex: *v },
        more => {
            return Err(Error::Internal(format!(
                "elliptic graph has {} curves with chi = 0; the dichotomy allows at most one",
                more.len()
            )))
        }
    };

    // Locate E: through the sequence when Z_K is integral, otherwise by the
    // bounded search (E always fits under Z_num).
    let e = match elliptic_sequence(graph) {
        Ok(seq) => seq.minimally_elliptic().clone(),
        Err(Error::Hypothesis(_)) => {
            let bound = oracle::SearchBound::explicit_cap(&z_num)?;
            let found = oracle::minimally_elliptic_bruteforce(graph, &bound)?;
            match found.as_slice() {
                [e] => e.clone(),
                other => {
                    return Err(Error::Internal(format!(
                        "expected one minimally elliptic cycle under Z_num, found {}",
                        other.len()
                    )))
                }
            }
        }
        Err(other) => return Err(other),
    };

    if let StructureVerdict::SingleNonRationalCurve { vertex } = verdict {
        if e != Cycle::basis(graph.vertex_count(), vertex) {
            return Err(Error::Internal(format!(
                "minimally elliptic cycle {e} is not the distinguished curve `{}`",
                graph.vertex(vertex).name
            )));
        }
    }

    // Components away from |E| each support a rational singularity.
    let e_support = e.support();
    let rest: BTreeSet<usize> = (0..graph.vertex_count())
        .filter(|i| !e_support.contains(i))
        .collect();
    for component in graph.components_of(&rest) {
        let (zc, _) = fundamental_cycle(graph, &component)?;
        let chi_c = euler_char(&form, &zc);
        if chi_c != BigInt::from(1) {
            return Err(Error::Internal(format!(
                "component away from |E| has fundamental cycle with chi = {chi_c}, expected 1"
            )));
        }
    }
    Ok(verdict)
}

/// Decomposition of a Z_num^2 = -1 graph (m >= 1): the complement of |E| is
/// a chain of smooth rational -2 curves, listed here from the |E|-adjacent
/// end outward. The last entry is the basepoint curve (the unique curve
/// meeting Z_num with intersection -1); `attach` is the unique |E| vertex
/// with attach.E = -1 where the chain hangs off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDecomposition {
    pub chain: Vec<usize>,
    pub basepoint: usize,
    pub attach: usize,
}

/// Verifies and returns the chain decomposition forced on numerically
/// Gorenstein elliptic graphs with Z_num^2 = -1 and m >= 1. Every structural
/// claim is checked; the graph shape leaves no tie-breaking freedom.
pub fn kodaira_chain(
    graph: &ResolutionGraph,
    seq: &EllipticSequence,
) -> Result<ChainDecomposition> {
    let form = graph.intersection_form();
    let z_num = seq.fundamental();
    let z_num_sq = form.pairing(z_num, z_num);
    if z_num_sq != BigInt::from(-1) {
        return Err(Error::Hypothesis(format!(
            "chain decomposition needs Z_num^2 = -1, got {z_num_sq}"
        )));
    }
    let m = seq.m();
    if m == 0 {
        return Err(Error::Precondition(
            "chain decomposition needs m >= 1; the graph is already minimally elliptic".into(),
        ));
    }
    let fail = |msg: String| Err(Error::Internal(msg));
    let members = seq.members();

    // Each tower level drops exactly one vertex; dropped first = outermost.
    let mut gammas: Vec<usize> = Vec::with_capacity(m);
    for j in 0..m {
        let diff: Vec<usize> = members[j]
            .support
            .difference(&members[j + 1].support)
            .copied()
            .collect();
        match diff.as_slice() {
            [v] => gammas.push(*v),
            _ => {
                return fail(format!(
                    "support {} sheds {} vertices, expected exactly one",
                    j,
                    diff.len()
                ))
            }
        }
    }
    for &gamma in &gammas {
        let v = graph.vertex(gamma);
        if !(v.is_smooth_rational() && v.self_int == -2) {
            return fail(format!(
                "chain vertex `{}` is not a smooth rational -2 curve",
                v.name
            ));
        }
    }

    let e = seq.minimally_elliptic();
    if form.pairing(e, e) != BigInt::from(-1) {
        return fail("E^2 is not -1".into());
    }

    // gamma_0 is the unique curve meeting Z_num, with multiplicity one in
    // both Z_num and Z_K.
    let gamma0 = gammas[0];
    for i in 0..graph.vertex_count() {
        let dot = form.row_dot(i, z_num);
        let expect = if i == gamma0 {
            BigInt::from(-1)
        } else {
            BigInt::zero()
        };
        if dot != expect {
            return fail(format!(
                "A_{i}.Z_num = {dot}, expected {expect} when Z_num^2 = -1"
            ));
        }
    }
    if z_num.coeff(gamma0) != &BigInt::from(1) || seq.z_k().coeff(gamma0) != &BigInt::from(1) {
        return fail("basepoint curve must have multiplicity 1 in Z_num and Z_K".into());
    }

    // Z_{B_j} = E + (the chain vertices still present at level j).
    for (j, member) in members.iter().enumerate() {
        let mut expect = e.clone();
        for &gamma in &gammas[j..] {
            expect.add_vertex(gamma);
        }
        if member.cycle != expect {
            return fail(format!(
                "member {j} is {}, expected E plus the remaining chain {expect}",
                member.cycle
            ));
        }
    }

    // Walk the chain: each gamma_j hangs on the next support at the unique
    // vertex meeting that support's cycle with intersection -1.
    let mut attach = None;
    for (j, &gamma) in gammas.iter().enumerate() {
        let next = &members[j + 1];
        let hits: Vec<(usize, u32)> = graph
            .neighbors(gamma)
            .into_iter()
            .filter(|(w, _)| next.support.contains(w))
            .collect();
        let [(anchor, mult)] = hits.as_slice() else {
            return fail(format!(
                "chain vertex `{}` meets {} vertices of the next support, expected one",
                graph.vertex(gamma).name,
                hits.len()
            ));
        };
        if *mult != 1 {
            return fail("chain attachment must be a simple edge".into());
        }
        let unique_anchor = next
            .support
            .iter()
            .filter(|&&w| form.row_dot(w, &next.cycle) == BigInt::from(-1))
            .copied()
            .collect::<Vec<_>>();
        if unique_anchor != vec![*anchor] {
            return fail("attachment vertex is not the unique -1 intersection point".into());
        }
        if j + 1 < m {
            if *anchor != gammas[j + 1] {
                return fail("chain vertices are not consecutive".into());
            }
        } else {
            attach = Some(*anchor);
        }
        // No stray neighbors: the chain is a bare path.
        let expected_neighbors: BTreeSet<usize> = if j == 0 {
            BTreeSet::from([*anchor])
        } else {
            BTreeSet::from([*anchor, gammas[j - 1]])
        };
        let actual: BTreeSet<usize> = graph.neighbors(gamma).into_iter().map(|(w, _)| w).collect();
        if actual != expected_neighbors {
            return fail(format!(
                "chain vertex `{}` has extra neighbors",
                graph.vertex(gamma).name
            ));
        }
    }

    let attach = attach.expect("m >= 1 sets the attachment");
    let mut chain = gammas;
    chain.reverse();
    Ok(ChainDecomposition {
        chain,
        basepoint: gamma0,
        attach,
    })
}
