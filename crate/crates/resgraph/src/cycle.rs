//! Cycles in the exceptional lattice and the two central constructions on
//! them: the fundamental cycle (smallest positive cycle intersecting every
//! curve non-positively, computed by the classical greedy algorithm) and the
//! canonical cycle (the rational solution of M x = -K degrees, integral
//! exactly when the graph is numerically Gorenstein).

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::graph::{IntersectionForm, ResolutionGraph};
use crate::linalg;
use crate::{Error, Result};

/// Integer divisor supported on the exceptional curves, stored densely in
/// vertex order. Coefficients are unbounded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    coeffs: Vec<BigInt>,
}

impl Cycle {
    pub fn zero(len: usize) -> Self {
        Cycle {
            coeffs: vec![BigInt::zero(); len],
        }
    }

    pub fn basis(len: usize, i: usize) -> Self {
        assert!(i < len);
        let mut c = Cycle::zero(len);
        c.coeffs[i] = BigInt::one();
        c
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        Cycle { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Cycle {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// All coefficients >= 0.
    pub fn is_effective(&self) -> bool {
        !self.coeffs.iter().any(Signed::is_negative)
    }

    /// Effective and nonzero.
    pub fn is_positive(&self) -> bool {
        self.is_effective() && !self.is_zero()
    }

    /// Componentwise <=.
    pub fn le(&self, other: &Cycle) -> bool {
        assert_eq!(self.len(), other.len());
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }

    /// Componentwise <= with at least one strict coordinate.
    pub fn lt(&self, other: &Cycle) -> bool {
        self.le(other) && self != other
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Cycle) -> Cycle {
        assert_eq!(self.len(), other.len());
        Cycle {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.min(b).clone())
                .collect(),
        }
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn add_vertex(&mut self, i: usize) {
        self.coeffs[i] += 1;
    }

    pub fn scaled(&self, k: u64) -> Cycle {
        Cycle {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

impl std::ops::Add for &Cycle {
    type Output = Cycle;
    fn add(self, rhs: &Cycle) -> Cycle {
        assert_eq!(self.len(), rhs.len());
        Cycle {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &Cycle {
    type Output = Cycle;
    fn sub(self, rhs: &Cycle) -> Cycle {
        assert_eq!(self.len(), rhs.len());
        Cycle {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(BigInt::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Divisor with rational coefficients; the canonical cycle lives here until
/// integrality is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCycle {
    coeffs: Vec<BigRational>,
}

impl RationalCycle {
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        RationalCycle { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    pub fn to_integer(&self) -> Option<Cycle> {
        if !self.is_integral() {
            return None;
        }
        Some(Cycle {
            coeffs: self.coeffs.iter().map(BigRational::to_integer).collect(),
        })
    }

    /// Componentwise ceiling; used to size search boxes.
    pub fn ceil(&self) -> Cycle {
        Cycle {
            coeffs: self.coeffs.iter().map(|c| c.ceil().to_integer()).collect(),
        }
    }
}

impl fmt::Display for RationalCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Riemann-Roch: chi(D) = -(D.D + D.K) / 2. The sum is even for every
/// integer cycle, guaranteed by adjunction; a parity failure means corrupt
/// graph data, not bad input.
pub fn euler_char(form: &IntersectionForm, d: &Cycle) -> BigInt {
    let total = form.pairing(d, d) + form.k_dot(d);
    assert!(total.is_even(), "D(D+K) must be even, got {total} for {d}");
    -(total / BigInt::from(2))
}

/// One greedy step: the vertex added and the cycle after the addition.
/// `step_intersection` is A_i . Z taken before the addition (always > 0),
/// `adds_smooth_rational` records whether the added curve is smooth rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceStep {
    pub vertex: usize,
    pub step_intersection: BigInt,
    pub adds_smooth_rational: bool,
    pub after: Cycle,
}

/// Trace of a greedy run: `end = start + sum of added basis cycles`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationSequence {
    pub start: Cycle,
    pub steps: Vec<SequenceStep>,
    pub end: Cycle,
}

impl ComputationSequence {
    /// Re-checks the defining step conditions; used by tests.
    pub fn verify(&self, form: &IntersectionForm) -> bool {
        let mut z = self.start.clone();
        for step in &self.steps {
            if form.row_dot(step.vertex, &z) != step.step_intersection
                || !step.step_intersection.is_positive()
            {
                return false;
            }
            z.add_vertex(step.vertex);
            if z != step.after {
                return false;
            }
        }
        z == self.end
    }
}

/// How the greedy loop picks among candidate vertices. The result is
/// provably choice-independent; seeded runs exist to test exactly that.
#[derive(Debug, Clone)]
pub enum ChoiceRule {
    FirstIndex,
    Seeded(u64),
}

/// splitmix64: tiny, deterministic across platforms and releases.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn pick(&mut self, len: usize) -> usize {
        (self.next() % len as u64) as usize
    }
}

const GREEDY_STEP_LIMIT: usize = 1_000_000;

fn check_subset(graph: &ResolutionGraph, subset: &BTreeSet<usize>) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::Precondition("subset of vertices is empty".into()));
    }
    if let Some(&i) = subset.iter().find(|&&i| i >= graph.vertex_count()) {
        return Err(Error::Precondition(format!(
            "vertex index {i} out of range"
        )));
    }
    if !graph.is_connected_subset(subset) {
        return Err(Error::Precondition(
            "subset does not induce a connected subgraph".into(),
        ));
    }
    Ok(())
}

/// Fundamental cycle over `subset`: the componentwise-smallest positive
/// cycle Z supported there with A_i . Z <= 0 for every i in the subset.
/// Greedy: start from one basis cycle, repeatedly add any curve meeting the
/// current cycle positively. Termination needs negative definiteness.
pub fn fundamental_cycle(
    graph: &ResolutionGraph,
    subset: &BTreeSet<usize>,
) -> Result<(Cycle, ComputationSequence)> {
    fundamental_cycle_with(graph, subset, &ChoiceRule::FirstIndex)
}

/// Fundamental cycle over the whole graph.
pub fn fundamental_cycle_full(graph: &ResolutionGraph) -> Result<(Cycle, ComputationSequence)> {
    fundamental_cycle(graph, &graph.full_support())
}

pub fn fundamental_cycle_with(
    graph: &ResolutionGraph,
    subset: &BTreeSet<usize>,
    rule: &ChoiceRule,
) -> Result<(Cycle, ComputationSequence)> {
    check_subset(graph, subset)?;
    let form = graph.intersection_form();
    let members: Vec<usize> = subset.iter().copied().collect();
    let mut rng = match rule {
        ChoiceRule::FirstIndex => None,
        ChoiceRule::Seeded(seed) => Some(SplitMix(*seed)),
    };
    let choose = |options: &[usize], rng: &mut Option<SplitMix>| -> usize {
        match rng {
            None => options[0],
            Some(r) => options[r.pick(options.len())],
        }
    };

    let start_vertex = choose(&members, &mut rng);
    let start = Cycle::basis(graph.vertex_count(), start_vertex);
    let mut z = start.clone();
    let mut steps = Vec::new();
    for _ in 0..GREEDY_STEP_LIMIT {
        let candidates: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| form.row_dot(i, &z).is_positive())
            .collect();
        if candidates.is_empty() {
            debug_assert!(members.iter().all(|&i| !form.row_dot(i, &z).is_positive()));
            return Ok((
                z.clone(),
                ComputationSequence {
                    start,
                    steps,
                    end: z,
                },
            ));
        }
        let vertex = choose(&candidates, &mut rng);
        let step_intersection = form.row_dot(vertex, &z);
        z.add_vertex(vertex);
        steps.push(SequenceStep {
            vertex,
            step_intersection,
            adds_smooth_rational: graph.vertex(vertex).is_smooth_rational(),
            after: z.clone(),
        });
    }
    Err(Error::Internal(format!(
        "greedy loop did not terminate within {GREEDY_STEP_LIMIT} steps; \
         the intersection form is probably not negative definite"
    )))
}

/// Continues the greedy loop from the fundamental cycle of a connected
/// sub-support until it reaches the fundamental cycle of `to_support`.
/// The per-step data records whether each added curve is smooth rational
/// and meets the running cycle with intersection exactly one, which is the
/// expected shape on elliptic graphs.
pub fn connecting_sequence(
    graph: &ResolutionGraph,
    from: &Cycle,
    to_support: &BTreeSet<usize>,
) -> Result<ComputationSequence> {
    check_subset(graph, to_support)?;
    if from.len() != graph.vertex_count() {
        return Err(Error::Precondition(
            "cycle length does not match the graph".into(),
        ));
    }
    if !from.is_positive() {
        return Err(Error::Precondition(
            "connecting sequence needs a positive starting cycle".into(),
        ));
    }
    let from_support = from.support();
    if !from_support.is_subset(to_support) {
        return Err(Error::Precondition(
            "starting support is not contained in the target support".into(),
        ));
    }
    let (expected_from, _) = fundamental_cycle(graph, &from_support)?;
    if &expected_from != from {
        return Err(Error::Precondition(format!(
            "starting cycle {from} is not the fundamental cycle {expected_from} of its support"
        )));
    }

    let form = graph.intersection_form();
    let members: Vec<usize> = to_support.iter().copied().collect();
    let mut z = from.clone();
    let mut steps = Vec::new();
    for _ in 0..GREEDY_STEP_LIMIT {
        let Some(vertex) = members
            .iter()
            .copied()
            .find(|&i| form.row_dot(i, &z).is_positive())
        else {
            let (target, _) = fundamental_cycle(graph, to_support)?;
            if z != target {
                return Err(Error::Precondition(format!(
                    "greedy continuation stopped at {z}, not at the fundamental cycle {target}"
                )));
            }
            return Ok(ComputationSequence {
                start: from.clone(),
                steps,
                end: z,
            });
        };
        let step_intersection = form.row_dot(vertex, &z);
        z.add_vertex(vertex);
        steps.push(SequenceStep {
            vertex,
            step_intersection,
            adds_smooth_rational: graph.vertex(vertex).is_smooth_rational(),
            after: z.clone(),
        });
    }
    Err(Error::Internal(format!(
        "greedy continuation did not terminate within {GREEDY_STEP_LIMIT} steps; \
         the intersection form is probably not negative definite"
    )))
}

/// Canonical cycle: the unique rational solution of M x = -(K degrees).
/// Returns the solution and whether it is integral (numerically Gorenstein).
/// On minimal graphs a nonzero canonical cycle has every coefficient
/// positive and dominates the fundamental cycle; both are re-checked here.
pub fn canonical_cycle(graph: &ResolutionGraph) -> Result<(RationalCycle, bool)> {
    let form = graph.intersection_form();
    let rhs: Vec<BigInt> = form.k_degrees().iter().map(|&k| BigInt::from(-k)).collect();
    let solution = linalg::solve_exact(form.matrix(), &rhs).ok_or_else(|| {
        Error::Precondition("intersection form is singular; graph is not valid".into())
    })?;
    let zk = RationalCycle::from_coeffs(solution);
    let integral = zk.is_integral();

    if graph.is_minimal() && !zk.is_zero() {
        if zk.coeffs().iter().any(|c| !c.is_positive()) {
            return Err(Error::Internal(format!(
                "nonzero canonical cycle {zk} has a non-positive coefficient on a minimal graph"
            )));
        }
        if let Some(z) = zk.to_integer() {
            let (z_num, _) = fundamental_cycle_full(graph)?;
            if !z_num.le(&z) {
                return Err(Error::Internal(format!(
                    "canonical cycle {z} fails to dominate the fundamental cycle {z_num}"
                )));
            }
        }
    }
    Ok((zk, integral))
}
