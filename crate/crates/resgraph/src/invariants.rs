//! Classification of a singularity from its resolution graph, and the
//! numeric pipeline that follows: geometric genus verdicts, multiplicity,
//! embedding dimension, the Hilbert-Samuel function, and generator degrees.
//!
//! Everything splits along one line. Facts on the topological side
//! (classification, the elliptic sequence, all cycle arithmetic) are
//! computed unconditionally. Facts on the analytic side need the Gorenstein
//! property, which no graph determines; the caller declares it as an
//! assumption and every conclusion that uses it says so in its trail.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cycle::{canonical_cycle, euler_char, fundamental_cycle_full, Cycle, RationalCycle};
use crate::elliptic::{
    elliptic_sequence, exceptional_curve_structure, kodaira_chain, ChainDecomposition,
    EllipticSequence, StructureVerdict,
};
use crate::graph::ResolutionGraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityClass {
    /// chi(Z_num) = 1.
    Rational,
    /// chi(Z_num) = 0.
    Elliptic,
    /// chi(Z_num) < 0; outside the scope of the numeric pipeline.
    Neither,
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityClass::Rational => write!(f, "rational"),
            SingularityClass::Elliptic => write!(f, "elliptic"),
            SingularityClass::Neither => write!(f, "neither (chi(Z_num) < 0)"),
        }
    }
}

/// Everything the graph alone decides.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub class: SingularityClass,
    pub chi_znum: BigInt,
    pub z_num: Cycle,
    pub z_num_sq: BigInt,
    pub z_k: RationalCycle,
    pub numerically_gorenstein: bool,
    /// Z_K = 0: the graph is one of the smooth-rational -2 configurations.
    pub du_val: bool,
    /// Z_K = Z_num != 0.
    pub minimally_elliptic: bool,
    /// H^1 of the exceptional set vanishes: tree, all genus 0, no nodes.
    pub h1_link_zero: bool,
    /// Length of the elliptic sequence; elliptic numerically Gorenstein only.
    pub m_plus_one: Option<usize>,
    pub structure_case: Option<StructureVerdict>,
    pub sequence: Option<EllipticSequence>,
}

/// True iff the exceptional set has no 1-cycles: the dual graph is a tree,
/// every curve has genus 0, and none has a node. Cusps are allowed; a
/// cuspidal rational curve is still a topological sphere.
pub fn h1_link_zero(graph: &ResolutionGraph) -> bool {
    graph.is_tree()
        && graph
            .vertices()
            .iter()
            .all(|v| v.genus == 0 && v.nodes == 0)
}

pub fn classify(graph: &ResolutionGraph) -> Result<ClassificationReport> {
    let validation = graph.validate();
    if !validation.is_valid() {
        return Err(Error::InvalidGraph(validation));
    }
    let form = graph.intersection_form();
    let (z_num, _) = fundamental_cycle_full(graph)?;
    let (z_k, numerically_gorenstein) = canonical_cycle(graph)?;
    let chi_znum = euler_char(&form, &z_num);
    let class = if chi_znum == BigInt::one() {
        SingularityClass::Rational
    } else if chi_znum.is_zero() {
        SingularityClass::Elliptic
    } else if chi_znum.is_negative() {
        SingularityClass::Neither
    } else {
        return Err(Error::Internal(format!(
            "chi(Z_num) = {chi_znum} > 1 on a valid graph"
        )));
    };
    let z_num_sq = form.pairing(&z_num, &z_num);
    let du_val = numerically_gorenstein && z_k.is_zero();
    let minimally_elliptic =
        numerically_gorenstein && !z_k.is_zero() && z_k.to_integer().as_ref() == Some(&z_num);
    if minimally_elliptic && class != SingularityClass::Elliptic {
        return Err(Error::Internal(
            "Z_K = Z_num != 0 forces chi(Z_num) = 0".into(),
        ));
    }

    let (m_plus_one, structure_case, sequence) =
        if class == SingularityClass::Elliptic && numerically_gorenstein {
            let seq = elliptic_sequence(graph)?;
            let structure = exceptional_curve_structure(graph)?;
            (Some(seq.m() + 1), Some(structure), Some(seq))
        } else {
            (None, None, None)
        };

    Ok(ClassificationReport {
        class,
        chi_znum,
        z_num,
        z_num_sq,
        z_k,
        numerically_gorenstein,
        du_val,
        minimally_elliptic,
        h1_link_zero: h1_link_zero(graph),
        m_plus_one,
        structure_case,
        sequence,
    })
}

/// Analytic hypotheses declared by the caller. Never inferred.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Assumptions {
    pub gorenstein: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PgVerdict {
    Exact(u64),
    Range { lo: u64, hi: u64 },
    Undetermined,
}

impl fmt::Display for PgVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PgVerdict::Exact(n) => write!(f, "{n}"),
            PgVerdict::Range { lo, hi } => write!(f, "between {lo} and {hi}"),
            PgVerdict::Undetermined => write!(f, "undetermined"),
        }
    }
}

/// One step of justification: what is claimed, the mathematical fact it
/// rests on, and which hypotheses (computed or declared) it consumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrailEntry {
    pub claim: String,
    pub basis: String,
    pub hypotheses: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct PgResult {
    pub verdict: PgVerdict,
    pub notes: Vec<String>,
    pub trail: Vec<TrailEntry>,
}

/// Geometric genus verdict. Never fails: when the theory does not pin a
/// value the verdict degrades to a range or to undetermined, with notes.
pub fn geometric_genus(report: &ClassificationReport, assumptions: &Assumptions) -> PgResult {
    let mut notes = Vec::new();
    let mut trail = Vec::new();
    let verdict = match report.class {
        SingularityClass::Rational => {
            trail.push(TrailEntry {
                claim: "p_g = 0".into(),
                basis: "chi(Z_num) = 1 characterizes rational singularities, \
                        and rational means geometric genus zero"
                    .into(),
                hypotheses: vec![],
            });
            PgVerdict::Exact(0)
        }
        SingularityClass::Neither => {
            notes.push(
                "chi(Z_num) < 0: the genus formulas implemented here apply only to \
                 rational and elliptic graphs"
                    .into(),
            );
            PgVerdict::Undetermined
        }
        SingularityClass::Elliptic => {
            if !report.numerically_gorenstein {
                notes.push(
                    "the canonical cycle is not integral, so the elliptic sequence \
                     and its length are undefined for this graph"
                        .into(),
                );
                if assumptions.gorenstein {
                    notes.push(
                        "the declared Gorenstein assumption contradicts the graph: \
                         a Gorenstein singularity is numerically Gorenstein"
                            .into(),
                    );
                }
                PgVerdict::Undetermined
            } else {
                let m_plus_one = report
                    .m_plus_one
                    .expect("elliptic numerically Gorenstein graphs carry a sequence")
                    as u64;
                let m = m_plus_one - 1;
                if assumptions.gorenstein {
                    if report.h1_link_zero {
                        trail.push(TrailEntry {
                            claim: format!("p_g = {m_plus_one}"),
                            basis: "for an elliptic Gorenstein singularity whose link is \
                                    a rational homology sphere, p_g equals the length of \
                                    the elliptic sequence"
                                .into(),
                            hypotheses: vec![
                                "gorenstein (declared)".into(),
                                "h1_link_zero (computed)".into(),
                            ],
                        });
                        PgVerdict::Exact(m_plus_one)
                    } else if m == 0 {
                        trail.push(TrailEntry {
                            claim: "p_g = 1".into(),
                            basis: "a minimally elliptic Gorenstein singularity has p_g = 1".into(),
                            hypotheses: vec!["gorenstein (declared)".into()],
                        });
                        PgVerdict::Exact(1)
                    } else {
                        trail.push(TrailEntry {
                            claim: format!("p_g <= {m_plus_one}"),
                            basis: "p_g never exceeds the length of the elliptic sequence".into(),
                            hypotheses: vec!["gorenstein (declared)".into()],
                        });
                        trail.push(TrailEntry {
                            claim: "p_g >= 2".into(),
                            basis: "with 1-cycles in the exceptional set, h1 of the \
                                    canonical cycle strictly exceeds h1 of the minimally \
                                    elliptic cycle, which is 1"
                                .into(),
                            hypotheses: vec!["gorenstein (declared)".into()],
                        });
                        notes.push(
                            "the exact value depends on the analytic structure, \
                             not only on the graph; both endpoints occur"
                                .into(),
                        );
                        PgVerdict::Range {
                            lo: 2,
                            hi: m_plus_one,
                        }
                    }
                } else if m == 0 {
                    notes.push(
                        "without the Gorenstein assumption the topology does not pin \
                         p_g on a minimally elliptic graph; Gorenstein structures on it \
                         have p_g = 1"
                            .into(),
                    );
                    PgVerdict::Undetermined
                } else {
                    trail.push(TrailEntry {
                        claim: format!("1 <= p_g <= {m_plus_one}"),
                        basis: "every non-rational singularity has p_g >= 1, and p_g \
                                never exceeds the length of the elliptic sequence"
                            .into(),
                        hypotheses: vec![],
                    });
                    notes.push(
                        "without the Gorenstein assumption p_g is generically 1 \
                         on this topology"
                            .into(),
                    );
                    PgVerdict::Range {
                        lo: 1,
                        hi: m_plus_one,
                    }
                }
            }
        }
    };
    PgResult {
        verdict,
        notes,
        trail,
    }
}

/// The shared entry gate of the multiplicity, embedding dimension,
/// Hilbert-Samuel, and generator-degree formulas: the graph must be
/// elliptic and numerically Gorenstein, and the genus verdict must be
/// pinned to exactly m + 1. Returns m.
fn pinned_genus_guard(report: &ClassificationReport, pg: &PgResult) -> Result<u64> {
    match report.class {
        SingularityClass::Rational => {
            return Err(Error::Hypothesis(
                "graph is rational; the formula needs an elliptic graph".into(),
            ))
        }
        SingularityClass::Neither => {
            return Err(Error::Hypothesis(format!(
                "chi(Z_num) = {}; the formula needs an elliptic graph",
                report.chi_znum
            )))
        }
        SingularityClass::Elliptic => {}
    }
    if !report.numerically_gorenstein {
        return Err(Error::Hypothesis(
            "graph is not numerically Gorenstein (the canonical cycle is not integral); \
             the formula needs a numerically Gorenstein graph"
                .into(),
        ));
    }
    let m_plus_one = report
        .m_plus_one
        .expect("elliptic numerically Gorenstein graphs carry a sequence")
        as u64;
    match &pg.verdict {
        PgVerdict::Exact(n) if *n == m_plus_one => Ok(m_plus_one - 1),
        other => Err(Error::Hypothesis(format!(
            "the formula needs p_g pinned to m + 1 = {m_plus_one}, but the verdict \
             under the declared assumptions is {other}; declare the Gorenstein \
             assumption on a graph whose topology pins the genus"
        ))),
    }
}

#[derive(Debug, Clone)]
pub struct MultiplicityResult {
    pub value: BigInt,
    /// Vertex carrying the basepoint when Z_num^2 = -1 and m >= 1.
    pub basepoint: Option<usize>,
    pub chain: Option<ChainDecomposition>,
    pub trail: Vec<TrailEntry>,
}

/// mult = -Z_num^2 when Z_num^2 <= -2, and 2 when Z_num^2 = -1. In the
/// latter case the maximal ideal cycle acquires a basepoint, located by the
/// chain decomposition when the sequence is long enough to define one.
pub fn multiplicity(
    graph: &ResolutionGraph,
    report: &ClassificationReport,
    pg: &PgResult,
) -> Result<MultiplicityResult> {
    let m = pinned_genus_guard(report, pg)?;
    let z_sq = &report.z_num_sq;
    let hypotheses = vec![
        "elliptic (computed)".into(),
        "numerically Gorenstein (computed)".into(),
        "p_g = m + 1 (pinned by assumptions)".into(),
    ];
    if *z_sq <= BigInt::from(-2) {
        let value = -z_sq.clone();
        let trail = vec![TrailEntry {
            claim: format!("mult = {value}"),
            basis: "with Z_num^2 <= -2 the maximal ideal sheaf pulls back to \
                    O(-Z_num), so the multiplicity is -Z_num^2"
                .into(),
            hypotheses,
        }];
        return Ok(MultiplicityResult {
            value,
            basepoint: None,
            chain: None,
            trail,
        });
    }
    debug_assert_eq!(*z_sq, BigInt::from(-1));
    let mut trail = vec![TrailEntry {
        claim: "mult = 2".into(),
        basis: "with Z_num^2 = -1 the generic hyperplane cut meets the exceptional \
                set in Z_num plus one basepoint, giving multiplicity 2"
            .into(),
        hypotheses,
    }];
    let (basepoint, chain) = if m >= 1 {
        let seq = report
            .sequence
            .as_ref()
            .expect("elliptic numerically Gorenstein graphs carry a sequence");
        let chain = kodaira_chain(graph, seq)?;
        trail.push(TrailEntry {
            claim: format!("basepoint on vertex {}", graph.vertex(chain.basepoint).name),
            basis: "the unique curve meeting Z_num with intersection -1 carries \
                    the single basepoint of the maximal ideal system"
                .into(),
            hypotheses: vec!["Z_num^2 = -1 (computed)".into(), "m >= 1 (computed)".into()],
        });
        (Some(chain.basepoint), Some(chain))
    } else {
        trail.push(TrailEntry {
            claim: "basepoint vertex not located".into(),
            basis: "the chain decomposition that pins the basepoint needs m >= 1; \
                    on a minimally elliptic graph the chain is empty"
                .into(),
            hypotheses: vec!["m = 0 (computed)".into()],
        });
        (None, None)
    };
    Ok(MultiplicityResult {
        value: BigInt::from(2),
        basepoint,
        chain,
        trail,
    })
}

#[derive(Debug, Clone)]
pub struct EmbeddingDimensionResult {
    pub value: BigInt,
    pub trail: Vec<TrailEntry>,
}

/// emb dim = max(3, -Z_num^2).
pub fn embedding_dimension(
    _graph: &ResolutionGraph,
    report: &ClassificationReport,
    pg: &PgResult,
) -> Result<EmbeddingDimensionResult> {
    pinned_genus_guard(report, pg)?;
    let neg_sq = -report.z_num_sq.clone();
    let value = neg_sq.max(BigInt::from(3));
    let trail = vec![TrailEntry {
        claim: format!("emb dim = {value}"),
        basis: "the embedding dimension is max(3, -Z_num^2); a normal surface \
                singularity never embeds below dimension 3"
            .into(),
        hypotheses: vec![
            "elliptic (computed)".into(),
            "numerically Gorenstein (computed)".into(),
            "p_g = m + 1 (pinned by assumptions)".into(),
        ],
    }];
    Ok(EmbeddingDimensionResult { value, trail })
}

/// dim O/m^k and dim m^k/m^(k+1) for one k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSamuelValue {
    pub k: u32,
    pub dim_quotient: BigInt,
    pub dim_graded: BigInt,
}

/// (chi(k Z_num) + 1, -k Z_num^2); defined when Z_num^2 <= -3. The pair of
/// outputs telescopes exactly because chi(Z_num) = 0, and that identity is
/// asserted on every call.
pub fn hilbert_samuel(
    graph: &ResolutionGraph,
    report: &ClassificationReport,
    pg: &PgResult,
    k: u32,
) -> Result<HilbertSamuelValue> {
    pinned_genus_guard(report, pg)?;
    if report.z_num_sq > BigInt::from(-3) {
        return Err(Error::Hypothesis(format!(
            "Z_num^2 = {}; the dimension formula needs Z_num^2 <= -3. For \
             Z_num^2 in {{-1, -2}} the ring structure is described by the \
             generator degrees instead",
            report.z_num_sq
        )));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be >= 1".into()));
    }
    let form = graph.intersection_form();
    let chi_k = euler_char(&form, &report.z_num.scaled(u64::from(k)));
    let chi_k1 = euler_char(&form, &report.z_num.scaled(u64::from(k) + 1));
    let dim_quotient = &chi_k + BigInt::one();
    let dim_graded = -BigInt::from(k) * &report.z_num_sq;
    if &chi_k1 - &chi_k != dim_graded {
        return Err(Error::Internal(format!(
            "telescoping identity failed at k = {k}: chi((k+1)Z) - chi(kZ) = {} \
             but -k Z_num^2 = {dim_graded}",
            &chi_k1 - &chi_k
        )));
    }
    Ok(HilbertSamuelValue {
        k,
        dim_quotient,
        dim_graded,
    })
}

#[derive(Debug, Clone)]
pub struct GeneratorDegrees {
    pub degrees: Vec<u8>,
    pub trail: Vec<TrailEntry>,
}

/// Degrees in which the associated graded ring is generated, keyed by
/// d = -Z_num^2: {1} when d >= 3, {1, 2} when d = 2, {1, 2, 3} when d = 1.
pub fn generator_degrees(
    _graph: &ResolutionGraph,
    report: &ClassificationReport,
    pg: &PgResult,
) -> Result<GeneratorDegrees> {
    pinned_genus_guard(report, pg)?;
    let d = -report.z_num_sq.clone();
    let (degrees, basis) = if d >= BigInt::from(3) {
        (
            vec![1],
            "with -Z_num^2 >= 3 the ring is generated in degree 1",
        )
    } else if d == BigInt::from(2) {
        (
            vec![1, 2],
            "with -Z_num^2 = 2 one extra generator of degree 2 is needed",
        )
    } else {
        (
            vec![1, 2, 3],
            "with -Z_num^2 = 1 extra generators of degrees 2 and 3 are needed",
        )
    };
    let trail = vec![TrailEntry {
        claim: format!(
            "generator degrees {{{}}}",
            degrees
                .iter()
                .map(u8::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
        basis: basis.into(),
        hypotheses: vec![
            "elliptic (computed)".into(),
            "numerically Gorenstein (computed)".into(),
            "p_g = m + 1 (pinned by assumptions)".into(),
        ],
    }];
    Ok(GeneratorDegrees { degrees, trail })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvariantFlags {
    /// Z_num^2 = -4: a complete intersection structure is possible.
    pub complete_intersection_possible: bool,
    /// Z_num^2 <= -5: no complete intersection structure exists.
    pub not_complete_intersection: bool,
    /// Z_num^2 = -1: the graph shape of a Kodaira singularity.
    pub kodaira_graph: bool,
    /// chi(Z_num) = 0 and Z_K = Z_num + E, i.e. m = 1; under the Gorenstein
    /// assumption with h1_link_zero this says exactly p_g = 2.
    pub pg2_characterization: bool,
    /// Name of the basepoint vertex when one is located.
    pub basepoint_vertex: Option<String>,
}

/// Structural flags read off Z_num^2; needs elliptic + numerically
/// Gorenstein but no genus pin.
pub fn auxiliary_flags(report: &ClassificationReport) -> Result<InvariantFlags> {
    if report.class != SingularityClass::Elliptic {
        return Err(Error::Hypothesis(format!(
            "flags are defined for elliptic graphs; this one is {}",
            report.class
        )));
    }
    if !report.numerically_gorenstein {
        return Err(Error::Hypothesis(
            "graph is not numerically Gorenstein (the canonical cycle is not integral)".into(),
        ));
    }
    let z_sq = &report.z_num_sq;
    Ok(InvariantFlags {
        complete_intersection_possible: *z_sq == BigInt::from(-4),
        not_complete_intersection: *z_sq <= BigInt::from(-5),
        kodaira_graph: *z_sq == BigInt::from(-1),
        pg2_characterization: report.m_plus_one == Some(2),
        basepoint_vertex: None,
    })
}

/// True iff chi(Z_num) = 0 and Z_K = Z_num + E, i.e. the elliptic sequence
/// has exactly two members. Under the Gorenstein assumption on a rational
/// homology sphere link this characterizes p_g = 2.
pub fn pg2_characterization(graph: &ResolutionGraph) -> Result<bool> {
    let report = classify(graph)?;
    if !report.numerically_gorenstein {
        return Err(Error::Hypothesis(
            "the p_g = 2 test needs a numerically Gorenstein graph".into(),
        ));
    }
    let holds = report.m_plus_one == Some(2);
    if holds {
        let seq = report
            .sequence
            .as_ref()
            .expect("m_plus_one implies sequence");
        let sum = seq.fundamental() + seq.minimally_elliptic();
        if report.z_k.to_integer().as_ref() != Some(&sum) {
            return Err(Error::Internal("m = 1 must force Z_K = Z_num + E".into()));
        }
    }
    Ok(holds)
}

/// First values of the Hilbert-Samuel function plus its closed form: with
/// d = -Z_num^2, dim O/m^k = d k(k-1)/2 + 1 and dim m^k/m^(k+1) = d k.
#[derive(Debug, Clone)]
pub struct HilbertSamuelDescriptor {
    pub degree: BigInt,
    pub samples: Vec<HilbertSamuelValue>,
}

/// The full pipeline report. Optional sections are absent exactly when
/// their hypotheses fail, and the notes say which hypothesis was missing;
/// the dedicated operations return hard errors in the same situations.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub assumptions: Assumptions,
    pub p_g: PgResult,
    pub multiplicity: Option<BigInt>,
    pub emb_dim: Option<BigInt>,
    pub hilbert_samuel: Option<HilbertSamuelDescriptor>,
    pub generator_degrees: Option<Vec<u8>>,
    pub flags: InvariantFlags,
    pub notes: Vec<String>,
    pub trail: Vec<TrailEntry>,
}

/// Runs every numeric invariant that the declared assumptions support.
/// Sections whose hypotheses fail are omitted with a note, so the report
/// itself never refuses; only genuinely broken inputs error.
pub fn invariant_report(
    graph: &ResolutionGraph,
    report: &ClassificationReport,
    assumptions: &Assumptions,
) -> Result<InvariantReport> {
    let p_g = geometric_genus(report, assumptions);
    let mut notes = p_g.notes.clone();
    let mut trail = p_g.trail.clone();

    let mut flags = match auxiliary_flags(report) {
        Ok(f) => f,
        Err(Error::Hypothesis(_)) => InvariantFlags::default(),
        Err(e) => return Err(e),
    };

    let mut multiplicity_value = None;
    match multiplicity(graph, report, &p_g) {
        Ok(res) => {
            multiplicity_value = Some(res.value.clone());
            trail.extend(res.trail.clone());
            if let Some(bp) = res.basepoint {
                flags.basepoint_vertex = Some(graph.vertex(bp).name.clone());
            }
            if res.value > BigInt::from(3) {
                notes.push(format!(
                    "mult = {} rules out a hypersurface structure: elliptic \
                     hypersurface singularities have multiplicity at most 3",
                    res.value
                ));
            }
        }
        Err(Error::Hypothesis(why)) => notes.push(format!("multiplicity not computed: {why}")),
        Err(e) => return Err(e),
    }

    let mut emb_dim = None;
    match embedding_dimension(graph, report, &p_g) {
        Ok(res) => {
            emb_dim = Some(res.value.clone());
            trail.extend(res.trail);
        }
        Err(Error::Hypothesis(why)) => {
            notes.push(format!("embedding dimension not computed: {why}"))
        }
        Err(e) => return Err(e),
    }

    let mut degrees = None;
    match generator_degrees(graph, report, &p_g) {
        Ok(res) => {
            degrees = Some(res.degrees.clone());
            trail.extend(res.trail);
        }
        Err(Error::Hypothesis(why)) => notes.push(format!("generator degrees not computed: {why}")),
        Err(e) => return Err(e),
    }

    let mut hs = None;
    if multiplicity_value.is_some() {
        if report.z_num_sq <= BigInt::from(-3) {
            let samples = (1..=5)
                .map(|k| hilbert_samuel(graph, report, &p_g, k))
                .collect::<Result<Vec<_>>>()?;
            hs = Some(HilbertSamuelDescriptor {
                degree: -report.z_num_sq.clone(),
                samples,
            });
        } else {
            notes.push(format!(
                "Hilbert-Samuel dimensions not computed: Z_num^2 = {} and the \
                 closed formula needs Z_num^2 <= -3; see the generator degrees",
                report.z_num_sq
            ));
        }
    }

    // mult >= 3 forces emb dim = mult; mult = 2 forces emb dim = 3.
    if let (Some(m), Some(e)) = (&multiplicity_value, &emb_dim) {
        let consistent = if *m >= BigInt::from(3) {
            e == m
        } else {
            *e == BigInt::from(3)
        };
        if !consistent {
            return Err(Error::Internal(format!(
                "multiplicity {m} and embedding dimension {e} violate the \
                 coupling between the two formulas"
            )));
        }
    }
    // Under gorenstein + h1_link_zero, the m = 1 flag must agree with an
    // exact p_g = 2 verdict.
    if assumptions.gorenstein && report.h1_link_zero && report.numerically_gorenstein {
        let exact2 = p_g.verdict == PgVerdict::Exact(2);
        if flags.pg2_characterization != exact2 {
            return Err(Error::Internal(
                "the m = 1 characterization and the exact p_g = 2 verdict disagree".into(),
            ));
        }
    }

    Ok(InvariantReport {
        assumptions: *assumptions,
        p_g,
        multiplicity: multiplicity_value,
        emb_dim,
        hilbert_samuel: hs,
        generator_degrees: degrees,
        flags,
        notes,
        trail,
    })
}
