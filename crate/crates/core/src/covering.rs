//! Chang's covering argument: from a proper coset progression inside
//! 2A − 2A, grow P_i by disjoint translates until few remain, then cover A by
//! Q + H with Q = (P − P) + S̄_0 + … + S̄_{t−1} + R̄_t.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::bohr::{CosetProgression, ProgressionGenerator};
use crate::check::{big, compare_logs, fmt_rational, Check};
use crate::error::{Error, Result};
use crate::group::Limits;
use crate::set::GroupSet;
use crate::sumset::{doubling, iterated_sumset, sumset};

/// A set together with a proper coset progression inside 2A − 2A.
#[derive(Clone, Debug)]
pub struct CoverInput {
    pub a: GroupSet,
    pub progression: CosetProgression,
    pub progression_set: GroupSet,
    /// η = |P + H| / |A|
    pub eta: BigRational,
    pub dimension: usize,
    /// K = |A + A| / |A|
    pub k: BigRational,
}

impl CoverInput {
    pub fn new(a: GroupSet, progression: CosetProgression, limits: &Limits) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::domain("cannot cover the empty set"));
        }
        if a.spec() != progression.spec() {
            return Err(Error::structural("set and progression live in different groups"));
        }
        if !progression.properness_check(limits)? {
            return Err(Error::domain("progression is not proper"));
        }
        let progression_set = progression.materialize(limits)?;
        let dd = iterated_sumset(&a, 2, 2)?;
        if !progression_set.is_subset(&dd) {
            return Err(Error::domain("progression is not contained in 2A − 2A"));
        }
        let eta = BigRational::new(BigInt::from(progression_set.len()), BigInt::from(a.len()));
        let k = doubling(&a)?.k_big();
        Ok(CoverInput { dimension: progression.dimension(), a, progression, progression_set, eta, k })
    }
}

/// m_K = ⌈2K⌉.
pub fn cover_width(k: &BigRational) -> usize {
    (k * big(2)).ceil().to_integer().to_usize().expect("small doubling")
}

/// Scans A in order, keeping x when P + x misses every translate kept so far.
pub fn greedy_disjoint_translates(a: &GroupSet, p: &GroupSet) -> Result<GroupSet> {
    a.same_group(p)?;
    if p.is_empty() {
        return Err(Error::domain("translates of the empty set"));
    }
    let spec = a.spec();
    let mut used = vec![false; spec.cardinality() as usize];
    let mut kept = Vec::new();
    for &x in a.indices() {
        let shifted: Vec<usize> = p.indices().iter().map(|&y| spec.add_idx(y, x)).collect();
        if shifted.iter().all(|&y| !used[y]) {
            shifted.iter().for_each(|&y| used[y] = true);
            kept.push(x);
        }
    }
    Ok(GroupSet::from_indices(spec.clone(), kept))
}

#[derive(Clone, Debug)]
pub struct CoverTrace {
    pub t: usize,
    pub m_k: usize,
    /// R_0, …, R_t
    pub r_sets: Vec<GroupSet>,
    /// S_0, …, S_{t−1}
    pub s_sets: Vec<GroupSet>,
    /// Final progression Q (base 0) and Q + H as a set.
    pub q: CosetProgression,
    pub q_set: GroupSet,
    pub checks: Vec<Check>,
    /// Bounds that the argument derives only for non-degenerate parameters;
    /// reported but not enforced.
    pub notes: Vec<Check>,
}

/// Q = (P − P) + S̄_0 + … + S̄_{t−1} + R̄_t, with the subgroup of P.
pub fn assemble_cover(
    p: &CosetProgression,
    s_sets: &[GroupSet],
    r_last: &GroupSet,
    limits: &Limits,
) -> Result<CosetProgression> {
    let spec = p.spec();
    let mut gens: Vec<ProgressionGenerator> = p
        .generators()
        .iter()
        .map(|g| ProgressionGenerator { element: g.element.clone(), lo: -(g.hi - g.lo), hi: g.hi - g.lo })
        .collect();
    for set in s_sets.iter().chain(std::iter::once(r_last)) {
        for x in set.elements() {
            gens.push(ProgressionGenerator { element: x, lo: -1, hi: 1 });
        }
    }
    CosetProgression::new(spec.clone(), spec.zero(), gens, p.subgroup().clone(), limits)
}

pub fn chang_cover(input: &CoverInput, limits: &Limits) -> Result<CoverTrace> {
    let m_k = cover_width(&input.k);
    let mut p_i = input.progression_set.clone();
    let mut r_sets = Vec::new();
    let mut s_sets = Vec::new();
    loop {
        let r = greedy_disjoint_translates(&input.a, &p_i)?;
        if r.len() <= m_k {
            r_sets.push(r);
            break;
        }
        let s = GroupSet::from_indices(r.spec().clone(), r.indices()[..m_k].to_vec());
        p_i = sumset(&p_i, &s)?;
        r_sets.push(r);
        s_sets.push(s);
    }
    let t = s_sets.len();
    let q = assemble_cover(&input.progression, &s_sets, &r_sets[t], limits)?;
    let q_set = q.materialize(limits)?;
    let mut trace = CoverTrace { t, m_k, r_sets, s_sets, q, q_set, checks: Vec::new(), notes: Vec::new() };
    let (checks, notes) = verify_cover(input, &trace, limits)?;
    trace.checks = checks;
    trace.notes = notes;
    if let Some(bad) = trace.checks.iter().find(|c| !c.passed()) {
        return Err(Error::invariant("covering", format!("{bad}")));
    }
    Ok(trace)
}

/// Recomputes every claim of a cover trace from A, P + H and the recorded
/// sets: the R_i are greedy-maximal disjoint families, the S_i are their
/// prefixes, the P_i grow exactly, and the final bounds hold.
pub fn verify_cover(input: &CoverInput, trace: &CoverTrace, limits: &Limits) -> Result<(Vec<Check>, Vec<Check>)> {
    let a = &input.a;
    let m_k = cover_width(&input.k);
    let t = trace.t;
    let mut checks = Vec::new();

    let shape_ok = trace.m_k == m_k && trace.r_sets.len() == t + 1 && trace.s_sets.len() == t;
    checks.push(Check::predicate("cover.shape", shape_ok, trace.r_sets.len(), t + 1));
    if !shape_ok {
        return Ok((checks, Vec::new()));
    }

    let mut p_i = input.progression_set.clone();
    let mut p_sizes_ok = true;
    let mut families_ok = true;
    let mut prefixes_ok = true;
    for i in 0..=t {
        let r = &trace.r_sets[i];
        families_ok &= r.is_subset(a) && disjoint_and_maximal(a, &p_i, r);
        if i < t {
            let s = &trace.s_sets[i];
            prefixes_ok &= r.len() > m_k && s.len() == m_k && s.indices() == &r.indices()[..m_k];
            let next = sumset(&p_i, s)?;
            p_sizes_ok &= next.len() == p_i.len() * s.len();
            p_i = next;
        } else {
            prefixes_ok &= r.len() <= m_k;
        }
    }
    checks.push(Check::predicate("cover.disjoint_maximal", families_ok, t + 1, "families"));
    checks.push(Check::predicate("cover.prefixes", prefixes_ok, m_k, "m_K"));
    checks.push(Check::predicate("cover.growth", p_sizes_ok, p_i.len(), "|P_i||S_i|"));

    // P_t ⊆ (t+2)A − 2A and |P_t| ≤ K^{t+4}|A|
    let big_sum = iterated_sumset(a, t + 2, 2)?;
    checks.push(Check::predicate("cover.P_t_in_sumset", p_i.is_subset(&big_sum), p_i.len(), big_sum.len()));
    let plun = num_traits::pow(input.k.clone(), t + 4) * big(a.len() as u64);
    checks.push(Check::le("cover.P_t_size", &big(p_i.len() as u64), &plun));

    // (i) A ⊆ Q + H
    let q_set = trace.q.materialize(limits)?;
    let expected_q = assemble_cover(&input.progression, &trace.s_sets, &trace.r_sets[t], limits)?;
    checks.push(Check::predicate("cover.q_matches", expected_q == trace.q && q_set == trace.q_set, q_set.len(), trace.q_set.len()));
    checks.push(Check::predicate("cover.contains_A", a.is_subset(&q_set), a.len(), q_set.len()));

    // (ii) t ≤ log2(K⁴/η), i.e. 2^t η ≤ K⁴
    let k4 = num_traits::pow(input.k.clone(), 4);
    checks.push(Check::le("cover.termination", &(num_traits::pow(big(2), t) * &input.eta), &k4));

    // (iii) dim Q ≤ d + 2 m_K (t+1)
    let d = input.dimension;
    checks.push(Check::le("cover.dimension", &big(trace.q.dimension() as u64), &big((d + 2 * m_k * (t + 1)) as u64)));

    // |Q + H| ≤ 2^d 3^{|S_0|+…+|R_t|} |P + H|, the exact form of the size estimate
    let cube_exp: usize = trace.s_sets.iter().map(|s| s.len()).sum::<usize>() + trace.r_sets[t].len();
    let chain = num_traits::pow(big(2), d) * num_traits::pow(big(3), cube_exp) * big(input.progression_set.len() as u64);
    checks.push(Check::le("cover.size_chain", &big(q_set.len() as u64), &chain));

    // (iv) |Q + H| ≤ 2^d (K⁴/η)^{5K} |A|, compared in logs
    let kf = input.k.to_f64().unwrap_or(f64::INFINITY);
    let ratio = &k4 / &input.eta;
    let rhs = d as f64 * std::f64::consts::LN_2 + 5.0 * kf * crate::check::ln_rational(&ratio) + (a.len() as f64).ln();
    let lhs = (q_set.len() as f64).ln();
    let size_note = Check::new(
        "cover.size_bound",
        compare_logs(lhs, rhs),
        format!("{:.6e}", lhs),
        format!("{:.6e}", rhs),
    );
    // dim Q ≤ d + 4K log2(K⁴/η)
    let dim_rhs = d as f64 + 4.0 * kf * crate::check::ln_rational(&ratio) / std::f64::consts::LN_2;
    let dim_note = Check::new(
        "cover.dimension_log_bound",
        compare_logs(trace.q.dimension() as f64, dim_rhs),
        trace.q.dimension(),
        format!("{:.6e}", dim_rhs),
    );
    Ok((checks, vec![size_note, dim_note]))
}

/// Translates P + x (x ∈ R) are pairwise disjoint and every a ∈ A ∖ R meets one.
fn disjoint_and_maximal(a: &GroupSet, p: &GroupSet, r: &GroupSet) -> bool {
    let spec = a.spec();
    let mut owner = vec![false; spec.cardinality() as usize];
    for &x in r.indices() {
        for &y in p.indices() {
            let z = spec.add_idx(y, x);
            if owner[z] {
                return false;
            }
            owner[z] = true;
        }
    }
    a.indices()
        .iter()
        .filter(|x| !r.contains_idx(**x))
        .all(|&x| p.indices().iter().any(|&y| owner[spec.add_idx(y, x)]))
}

pub fn describe_eta(eta: &BigRational) -> String {
    if eta >= &BigRational::one() {
        fmt_rational(eta)
    } else {
        format!("{} (~{:.4e})", fmt_rational(eta), eta.to_f64().unwrap_or(0.0))
    }
}
