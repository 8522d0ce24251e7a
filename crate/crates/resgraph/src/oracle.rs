//! Independent brute-force verifiers. Everything here re-derives answers by
//! bounded exhaustive enumeration, sharing no logic with the fast paths, so
//! agreement between the two routes is evidence rather than tautology.
//!
//! Every search is confined to a box 0 < D <= cap. Results are only as
//! strong as the box, so each bound records where its cap came from and the
//! box size is checked against a safety limit before any scan starts
//! (default 10^7 cycles; the CLI honors RESGRAPH_ORACLE_LIMIT).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cycle::{canonical_cycle, fundamental_cycle, fundamental_cycle_full, Cycle};
use crate::elliptic::EllipticSequence;
use crate::graph::{IntersectionForm, ResolutionGraph};
use crate::invariants;
use crate::{Error, Result};

/// Default ceiling on how many cycles a single scan may visit.
pub const DEFAULT_LIMIT: u64 = 10_000_000;

/// Where a search cap came from; reported alongside every oracle answer so
/// truncated searches are never mistaken for complete ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundOrigin {
    /// ceil(Z_K) + Z_num, the default: every cycle the theory talks about
    /// fits under it.
    CanonicalPlusFundamental,
    /// t * Z_num.
    FundamentalMultiple(u32),
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBound {
    cap: Vec<i64>,
    origin: BoundOrigin,
    limit: u64,
}

impl SearchBound {
    pub fn default_for(graph: &ResolutionGraph) -> Result<Self> {
        let (z_num, _) = fundamental_cycle_full(graph)?;
        let (zk, _) = canonical_cycle(graph)?;
        let zk_ceil = zk.ceil();
        let cap: Vec<i64> = z_num
            .coeffs()
            .iter()
            .zip(zk_ceil.coeffs())
            .map(|(zn, zk)| {
                let zn = big_to_i64(zn)?;
                let zk = big_to_i64(zk)?.max(0);
                Ok(zn + zk)
            })
            .collect::<Result<_>>()?;
        Ok(SearchBound {
            cap,
            origin: BoundOrigin::CanonicalPlusFundamental,
            limit: DEFAULT_LIMIT,
        })
    }

    pub fn fundamental_multiple(graph: &ResolutionGraph, t: u32) -> Result<Self> {
        let (z_num, _) = fundamental_cycle_full(graph)?;
        let cap = cap_from_cycle(&z_num.scaled(u64::from(t)))?;
        Ok(SearchBound {
            cap,
            origin: BoundOrigin::FundamentalMultiple(t),
            limit: DEFAULT_LIMIT,
        })
    }

    pub fn explicit(cap: Vec<i64>) -> Result<Self> {
        if cap.iter().any(|&c| c < 0) {
            return Err(Error::Precondition("search cap must be >= 0".into()));
        }
        Ok(SearchBound {
            cap,
            origin: BoundOrigin::Explicit,
            limit: DEFAULT_LIMIT,
        })
    }

    pub fn explicit_cap(cycle: &Cycle) -> Result<Self> {
        Self::explicit(cap_from_cycle(cycle)?)
    }

    pub fn with_limit(mut self, limit: u64) -> Self {
        self.limit = limit;
        self
    }

    pub fn cap(&self) -> &[i64] {
        &self.cap
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn origin(&self) -> &BoundOrigin {
        &self.origin
    }

    pub fn describe(&self) -> String {
        let cap = self
            .cap
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(", ");
        let origin = match self.origin {
            BoundOrigin::CanonicalPlusFundamental => "ceil(Z_K) + Z_num".to_string(),
            BoundOrigin::FundamentalMultiple(t) => format!("{t} * Z_num"),
            BoundOrigin::Explicit => "explicit".to_string(),
        };
        format!("cap ({cap}) [{origin}]")
    }
}

fn big_to_i64(b: &BigInt) -> Result<i64> {
    b.to_i64().ok_or(Error::EnumerationLimit {
        cycles: u128::MAX,
        limit: DEFAULT_LIMIT,
    })
}

fn cap_from_cycle(c: &Cycle) -> Result<Vec<i64>> {
    c.coeffs().iter().map(big_to_i64).collect()
}

/// Incremental odometer over a coefficient box, ascending lexicographic in
/// vertex order. Maintains every A_i . D and D . K as it steps, so a chi
/// evaluation is O(support).
struct BoxScan {
    matrix: Vec<Vec<i64>>,
    k: Vec<i64>,
    support: Vec<usize>,
    cap: Vec<i64>,
    coeffs: Vec<i64>,
    row_dots: Vec<i64>,
    dk: i64,
    n: usize,
}

impl BoxScan {
    /// Starts at the zero cycle. `support` lists the scanned coordinates;
    /// caps align with it and must be >= 1.
    fn new(
        form: &IntersectionForm,
        support: Vec<usize>,
        cap: Vec<i64>,
        limit: u64,
    ) -> Result<Self> {
        assert_eq!(support.len(), cap.len());
        if let Some(p) = cap.iter().position(|&c| c < 1) {
            return Err(Error::Precondition(format!(
                "search cap is {} on vertex {}, must be >= 1 on the enumerated support",
                cap[p], support[p]
            )));
        }
        let mut size: u128 = 1;
        for &c in &cap {
            size = size.saturating_mul(c as u128 + 1);
        }
        let positive_cycles = size - 1;
        if positive_cycles > u128::from(limit) {
            return Err(Error::EnumerationLimit {
                cycles: positive_cycles,
                limit,
            });
        }
        let n = form.n();
        Ok(BoxScan {
            matrix: form.matrix().to_vec(),
            k: form.k_degrees().to_vec(),
            coeffs: vec![0; support.len()],
            support,
            cap,
            row_dots: vec![0; n],
            dk: 0,
            n,
        })
    }

    /// Steps to the next point of the box; false once exhausted.
    fn advance(&mut self) -> bool {
        let mut p = self.support.len();
        loop {
            if p == 0 {
                return false;
            }
            p -= 1;
            if self.coeffs[p] < self.cap[p] {
                break;
            }
        }
        self.coeffs[p] += 1;
        let vp = self.support[p];
        for i in 0..self.n {
            self.row_dots[i] += self.matrix[i][vp];
        }
        self.dk += self.k[vp];
        for q in p + 1..self.support.len() {
            let c = self.coeffs[q];
            if c != 0 {
                let vq = self.support[q];
                for i in 0..self.n {
                    self.row_dots[i] -= c * self.matrix[i][vq];
                }
                self.dk -= c * self.k[vq];
                self.coeffs[q] = 0;
            }
        }
        true
    }

    fn chi(&self) -> i64 {
        let mut dd: i128 = 0;
        for (p, &c) in self.coeffs.iter().enumerate() {
            dd += i128::from(c) * i128::from(self.row_dots[self.support[p]]);
        }
        let total = dd + i128::from(self.dk);
        debug_assert_eq!(total % 2, 0);
        i64::try_from(-(total / 2)).expect("chi exceeds i64 inside a bounded box")
    }

    /// D . A_i <= 0 for every listed row.
    fn anti_nef_on(&self, rows: &[usize]) -> bool {
        rows.iter().all(|&i| self.row_dots[i] <= 0)
    }

    fn snapshot(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.n];
        for (p, &c) in self.coeffs.iter().enumerate() {
            v[self.support[p]] = c;
        }
        v
    }

    fn to_cycle(&self) -> Cycle {
        Cycle::from_i64(&self.snapshot())
    }
}

fn full_scan(graph: &ResolutionGraph, bound: &SearchBound) -> Result<BoxScan> {
    let form = graph.intersection_form();
    if bound.cap.len() != graph.vertex_count() {
        return Err(Error::Precondition(
            "search cap length does not match the graph".into(),
        ));
    }
    BoxScan::new(
        &form,
        (0..graph.vertex_count()).collect(),
        bound.cap.clone(),
        bound.limit,
    )
}

/// All cycles 0 < D <= cap in ascending lexicographic order.
pub fn enumerate_cycles(
    graph: &ResolutionGraph,
    bound: &SearchBound,
) -> Result<impl Iterator<Item = Cycle>> {
    let mut scan = full_scan(graph, bound)?;
    Ok(std::iter::from_fn(move || {
        if scan.advance() {
            Some(scan.to_cycle())
        } else {
            None
        }
    }))
}

#[derive(Debug, Clone)]
pub struct MinChiResult {
    pub min: i64,
    /// First minimizer in enumeration order.
    pub witness: Cycle,
    pub bound: SearchBound,
}

/// Minimum of chi over the box, with a witness. The true minimum over all
/// positive cycles is attained inside the default box; an explicit smaller
/// cap only bounds it from above.
pub fn min_chi_bruteforce(graph: &ResolutionGraph, bound: &SearchBound) -> Result<MinChiResult> {
    let mut scan = full_scan(graph, bound)?;
    let mut best: Option<(i64, Vec<i64>)> = None;
    while scan.advance() {
        let chi = scan.chi();
        if best.as_ref().is_none_or(|(b, _)| chi < *b) {
            best = Some((chi, scan.snapshot()));
        }
    }
    let (min, witness) = best.ok_or_else(|| {
        Error::Precondition("search box is empty; cap must be >= 1 somewhere".into())
    })?;
    Ok(MinChiResult {
        min,
        witness: Cycle::from_i64(&witness),
        bound: bound.clone(),
    })
}

/// Fundamental cycle over `subset` by exhaustive search: componentwise
/// minimum of every anti-nef positive cycle in the box. The cap is twice
/// the greedy answer, so the two routes stay meaningfully independent: the
/// greedy result is only used to size the box.
pub fn fundamental_cycle_bruteforce(
    graph: &ResolutionGraph,
    subset: &BTreeSet<usize>,
    limit: u64,
) -> Result<Cycle> {
    let (greedy, _) = fundamental_cycle(graph, subset)?;
    let form = graph.intersection_form();
    let support: Vec<usize> = subset.iter().copied().collect();
    let cap: Vec<i64> = support
        .iter()
        .map(|&i| big_to_i64(greedy.coeff(i)).map(|c| 2 * c))
        .collect::<Result<_>>()?;
    let rows = support.clone();
    let mut scan = BoxScan::new(&form, support, cap, limit)?;
    let mut best: Option<Vec<i64>> = None;
    while scan.advance() {
        if !scan.anti_nef_on(&rows) {
            continue;
        }
        let cur = scan.snapshot();
        best = Some(match best {
            None => cur,
            Some(prev) => prev.iter().zip(&cur).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    let best = best.ok_or_else(|| {
        Error::Internal("no anti-nef cycle in the box; the greedy answer should be one".into())
    })?;
    Ok(Cycle::from_i64(&best))
}

/// Every anti-nef positive cycle in the 2 * fundamental box over `subset`.
/// Used by tests to check the candidate set is closed under componentwise
/// minimum; collect only on small boxes.
pub fn anti_nef_candidates(
    graph: &ResolutionGraph,
    subset: &BTreeSet<usize>,
    limit: u64,
) -> Result<Vec<Cycle>> {
    let (greedy, _) = fundamental_cycle(graph, subset)?;
    let form = graph.intersection_form();
    let support: Vec<usize> = subset.iter().copied().collect();
    let cap: Vec<i64> = support
        .iter()
        .map(|&i| big_to_i64(greedy.coeff(i)).map(|c| 2 * c))
        .collect::<Result<_>>()?;
    let rows = support.clone();
    let mut scan = BoxScan::new(&form, support, cap, limit)?;
    let mut out = Vec::new();
    while scan.advance() {
        if scan.anti_nef_on(&rows) {
            out.push(scan.to_cycle());
        }
    }
    Ok(out)
}

fn le_slice(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// All minimally elliptic cycles in the box: cycles E with chi(E) = 0 such
/// that every 0 < D < E has chi(D) > 0. Equivalently the minimal elements
/// of { D > 0 : chi(D) <= 0 } that actually reach chi = 0. Empty on
/// rational graphs; a singleton on elliptic ones.
pub fn minimally_elliptic_bruteforce(
    graph: &ResolutionGraph,
    bound: &SearchBound,
) -> Result<Vec<Cycle>> {
    let mut scan = full_scan(graph, bound)?;
    // Antichain of the minimal chi <= 0 cycles seen so far.
    let mut minimal: Vec<(Vec<i64>, i64)> = Vec::new();
    while scan.advance() {
        let chi = scan.chi();
        if chi > 0 {
            continue;
        }
        let cur = scan.snapshot();
        if minimal.iter().any(|(m, _)| le_slice(m, &cur)) {
            continue;
        }
        minimal.retain(|(m, _)| !le_slice(&cur, m));
        minimal.push((cur, chi));
    }
    Ok(minimal
        .into_iter()
        .filter(|(_, chi)| *chi == 0)
        .map(|(v, _)| Cycle::from_i64(&v))
        .collect())
}

/// Outcome of the exhaustive check that the elliptic sequence's sums are
/// the only cycles of their kind below the canonical cycle.
#[derive(Debug, Clone)]
pub struct SequenceSumsCheck {
    /// The cycles 0 <= Z <= Z_K with Z . A_i <= 0 everywhere are exactly
    /// {0, C_0, ..., C_m} where C_t is the t-th partial sum.
    pub partial_sums_match: bool,
    /// The cycles 0 <= Z <= Z_K with A_i . (Z - Z_K) >= 0 on the support of
    /// Z are exactly {0, C'_0, ..., C'_m} where C'_t is the t-th tail sum.
    pub tail_sums_match: bool,
    pub anti_nef_found: Vec<Cycle>,
    pub tail_like_found: Vec<Cycle>,
}

impl SequenceSumsCheck {
    pub fn passed(&self) -> bool {
        self.partial_sums_match && self.tail_sums_match
    }
}

/// Scans the full box 0 <= Z <= Z_K and compares both distinguished cycle
/// families against the sequence's partial and tail sums.
pub fn check_sequence_sums(
    graph: &ResolutionGraph,
    seq: &EllipticSequence,
    limit: u64,
) -> Result<SequenceSumsCheck> {
    let form = graph.intersection_form();
    let n = graph.vertex_count();
    let cap = cap_from_cycle(seq.z_k())?;
    let all_rows: Vec<usize> = (0..n).collect();
    let mut scan = BoxScan::new(&form, all_rows.clone(), cap, limit)?;

    let mut anti_nef: Vec<Vec<i64>> = vec![vec![0; n]]; // zero qualifies for both
    let mut tail_like: Vec<Vec<i64>> = vec![vec![0; n]];
    while scan.advance() {
        if scan.anti_nef_on(&all_rows) {
            anti_nef.push(scan.snapshot());
        }
        // A_i . (Z - Z_K) >= 0 on the support of Z. Since M Z_K = -K by
        // definition, the condition is row_dot_i(Z) + k_i >= 0.
        let on_support_ok =
            scan.coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .all(|(p, _)| {
                    let i = scan.support[p];
                    scan.row_dots[i] + scan.k[i] >= 0
                });
        if on_support_ok {
            tail_like.push(scan.snapshot());
        }
    }

    let to_i64_sorted = |cycles: Vec<Vec<i64>>| {
        let mut v = cycles;
        v.sort();
        v.dedup();
        v
    };
    let expect_partials: Vec<Vec<i64>> = std::iter::once(Ok(vec![0; n]))
        .chain((0..=seq.m()).map(|t| cap_from_cycle(seq.partial_sum(t))))
        .collect::<Result<_>>()?;
    let expect_tails: Vec<Vec<i64>> = std::iter::once(Ok(vec![0; n]))
        .chain((0..=seq.m()).map(|t| cap_from_cycle(seq.tail_sum(t))))
        .collect::<Result<_>>()?;

    let anti_nef = to_i64_sorted(anti_nef);
    let tail_like = to_i64_sorted(tail_like);
    let partial_sums_match = anti_nef == to_i64_sorted(expect_partials);
    let tail_sums_match = tail_like == to_i64_sorted(expect_tails);
    Ok(SequenceSumsCheck {
        partial_sums_match,
        tail_sums_match,
        anti_nef_found: anti_nef.iter().map(|v| Cycle::from_i64(v)).collect(),
        tail_like_found: tail_like.iter().map(|v| Cycle::from_i64(v)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone)]
pub struct VerifyRow {
    pub check: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// Cross-checks every fast-path answer against its brute-force counterpart
/// on one graph. Each row is independent; a box-limit overflow turns into a
/// failing row rather than aborting the table.
pub fn verify_graph(graph: &ResolutionGraph, bound: &SearchBound) -> Result<Vec<VerifyRow>> {
    let mut rows = Vec::new();
    let mut push = |check: &str, status: CheckStatus, detail: String| {
        rows.push(VerifyRow {
            check: check.to_string(),
            status,
            detail,
        });
    };
    let report = invariants::classify(graph)?;

    {
        let check = "greedy fundamental cycle equals exhaustive minimum";
        match fundamental_cycle_bruteforce(graph, &graph.full_support(), bound.limit()) {
            Ok(brute) => {
                if brute == report.z_num {
                    push(check, CheckStatus::Pass, format!("both {brute}"));
                } else {
                    push(
                        check,
                        CheckStatus::Fail,
                        format!("greedy {} vs exhaustive {brute}", report.z_num),
                    );
                }
            }
            Err(e) => push(check, CheckStatus::Fail, e.to_string()),
        }
    }

    let mut min_chi: Option<i64> = None;
    {
        let check = "minimum of chi over the box matches the classification";
        match min_chi_bruteforce(graph, bound) {
            Ok(res) => {
                min_chi = Some(res.min);
                let expected = match report.class {
                    invariants::SingularityClass::Rational => 1,
                    invariants::SingularityClass::Elliptic => 0,
                    invariants::SingularityClass::Neither => i64::MIN,
                };
                let ok = if expected == i64::MIN {
                    res.min < 0
                } else {
                    res.min == expected
                };
                let detail = format!(
                    "min chi = {} at {} within {}",
                    res.min,
                    res.witness,
                    res.bound.describe()
                );
                push(
                    check,
                    if ok {
                        CheckStatus::Pass
                    } else {
                        CheckStatus::Fail
                    },
                    detail,
                );
            }
            Err(e) => push(check, CheckStatus::Fail, e.to_string()),
        }
    }

    {
        let check = "minimally elliptic cycle is unique and matches the sequence";
        if report.class != invariants::SingularityClass::Elliptic {
            push(check, CheckStatus::Skip, "graph is not elliptic".into());
        } else {
            match minimally_elliptic_bruteforce(graph, bound) {
                Ok(found) => match (found.as_slice(), report.sequence.as_ref()) {
                    ([e], Some(seq)) => {
                        if e == seq.minimally_elliptic() {
                            push(check, CheckStatus::Pass, format!("E = {e}"));
                        } else {
                            push(
                                check,
                                CheckStatus::Fail,
                                format!("exhaustive {e} vs sequence {}", seq.minimally_elliptic()),
                            );
                        }
                    }
                    ([e], None) => push(
                        check,
                        CheckStatus::Pass,
                        format!("E = {e} (no sequence: not numerically Gorenstein)"),
                    ),
                    (other, _) => push(
                        check,
                        CheckStatus::Fail,
                        format!(
                            "found {} minimally elliptic cycles, expected 1",
                            other.len()
                        ),
                    ),
                },
                Err(e) => push(check, CheckStatus::Fail, e.to_string()),
            }
        }
    }

    {
        let check = "cycles below Z_K with the distinguished intersection signs \
                     are exactly the sequence sums";
        match report.sequence.as_ref() {
            None => push(
                check,
                CheckStatus::Skip,
                "needs an elliptic numerically Gorenstein graph".into(),
            ),
            Some(seq) => match check_sequence_sums(graph, seq, bound.limit()) {
                Ok(outcome) => {
                    let detail = format!(
                        "anti-nef: {}, tail-like: {}",
                        outcome.partial_sums_match, outcome.tail_sums_match
                    );
                    push(
                        check,
                        if outcome.passed() {
                            CheckStatus::Pass
                        } else {
                            CheckStatus::Fail
                        },
                        detail,
                    );
                }
                Err(e) => push(check, CheckStatus::Fail, e.to_string()),
            },
        }
    }

    {
        let check = "seeded greedy runs all agree";
        let mut agree = true;
        let mut detail = String::new();
        for seed in 0..20u64 {
            match crate::cycle::fundamental_cycle_with(
                graph,
                &graph.full_support(),
                &crate::cycle::ChoiceRule::Seeded(seed),
            ) {
                Ok((z, _)) if z == report.z_num => {}
                Ok((z, _)) => {
                    agree = false;
                    detail = format!("seed {seed} produced {z} instead of {}", report.z_num);
                    break;
                }
                Err(e) => {
                    agree = false;
                    detail = e.to_string();
                    break;
                }
            }
        }
        if agree {
            detail = format!("20 seeds all produced {}", report.z_num);
        }
        push(
            check,
            if agree {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail,
        );
    }

    {
        let check = "embedding dimension >= multiplicity + min chi (assuming Gorenstein)";
        let assumptions = invariants::Assumptions { gorenstein: true };
        let pg = invariants::geometric_genus(&report, &assumptions);
        match (
            invariants::multiplicity(graph, &report, &pg),
            invariants::embedding_dimension(graph, &report, &pg),
            min_chi,
        ) {
            (Ok(mult), Ok(emb), Some(chi_min)) => {
                let lower = &mult.value + BigInt::from(chi_min);
                if emb.value >= lower {
                    push(
                        check,
                        CheckStatus::Pass,
                        format!("{} >= {} + {chi_min}", emb.value, mult.value),
                    );
                } else {
                    push(
                        check,
                        CheckStatus::Fail,
                        format!("{} < {} + {chi_min}", emb.value, mult.value),
                    );
                }
            }
            (Err(Error::Hypothesis(why)), _, _) | (_, Err(Error::Hypothesis(why)), _) => {
                push(check, CheckStatus::Skip, why);
            }
            (Err(e), _, _) | (_, Err(e), _) => push(check, CheckStatus::Fail, e.to_string()),
            (_, _, None) => push(check, CheckStatus::Skip, "min chi scan failed".into()),
        }
    }

    Ok(rows)
}
