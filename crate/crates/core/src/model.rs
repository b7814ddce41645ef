//! Finding small Freiman models: shrink the ambient group along a character
//! whose kernel nearly contains A − A, with specialized shrinkers for F_2^m
//! and for sets of integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive};

use crate::check::{big, compare_logs, ln_rational, Status};
use crate::error::{Error, Result};
use crate::fourier::transform_indices;
use crate::freiman::{is_freiman_iso, FreimanMap};
use crate::group::{Character, GroupElement, GroupSpec, Limits};
use crate::set::GroupSet;
use crate::sumset::{difference_set, doubling, iterated_sumset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelStepParams {
    pub s: usize,
    /// Arc length bound: the arc around ψ(A − A) must have l < δq.
    pub delta: Ratio<i64>,
}

impl ModelStepParams {
    /// δ = 1/(4s), which makes every arc found short enough for the shrink.
    pub fn new(s: usize) -> Result<Self> {
        Self::with_delta(s, Ratio::new(1, 4 * s.max(1) as i64))
    }

    pub fn with_delta(s: usize, delta: Ratio<i64>) -> Result<Self> {
        if s < 2 {
            return Err(Error::domain("model order s must be at least 2"));
        }
        if delta <= Ratio::from_integer(0) || delta >= Ratio::new(1, 2) {
            return Err(Error::domain(format!("delta {delta} outside (0, 1/2)")));
        }
        Ok(ModelStepParams { s, delta })
    }
}

/// The quantities the existence argument predicts for a set with doubling K
/// and difference-set density E1_D.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaParameters {
    /// ε = δ²/K²
    pub epsilon: BigRational,
    /// κ = 1/(4K²)
    pub kappa: BigRational,
    /// η = 9K^{-2} (E1_D)^{1/2K²} log(1/E1_D)
    pub eta: f64,
}

pub fn lemma_parameters(k: &BigRational, d_density: &BigRational, delta: &Ratio<i64>) -> LemmaParameters {
    let k2 = k * k;
    let delta = BigRational::new(BigInt::from(*delta.numer()), BigInt::from(*delta.denom()));
    let k2f = k2.to_f64().unwrap_or(f64::INFINITY);
    let ln_d = ln_rational(d_density);
    let eta = 9.0 / k2f * (ln_d / (2.0 * k2f)).exp() * (-ln_d);
    LemmaParameters { epsilon: &delta * &delta / &k2, kappa: BigRational::one() / (big(4) * k2), eta }
}

/// An arc {b, b+1, …, b+l} of Z/q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub start: u64,
    pub length: u64,
}

impl Arc {
    pub fn contains(&self, v: u64, q: u64) -> bool {
        (v + q - self.start % q) % q <= self.length
    }
}

/// Shortest arc of Z/q covering at least `need` of the given values (with
/// multiplicity); ties go to the smallest start.
pub fn shortest_arc(values: &[u64], q: u64, need: usize) -> Option<Arc> {
    if need == 0 {
        return Some(Arc { start: 0, length: 0 });
    }
    if values.len() < need {
        return None;
    }
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for &v in values {
        *counts.entry(v % q).or_default() += 1;
    }
    let pts: Vec<(u64, usize)> = counts.into_iter().collect();
    let m = pts.len();
    let pos = |i: usize| pts[i % m].0 + if i >= m { q } else { 0 };
    let cnt = |i: usize| pts[i % m].1;
    let mut best: Option<Arc> = None;
    let mut j = 0usize;
    let mut covered = 0usize;
    for i in 0..m {
        if j < i {
            j = i;
            covered = 0;
        }
        while covered < need && j < i + m {
            covered += cnt(j);
            j += 1;
        }
        if covered >= need {
            let length = pos(j - 1) - pos(i);
            if best.is_none_or(|b| length < b.length) {
                best = Some(Arc { start: pos(i), length });
            }
        }
        covered -= cnt(i);
    }
    best
}

/// A character whose homomorphism ψ squeezes A into a short arc.
#[derive(Clone, Debug, PartialEq)]
pub struct Concentration {
    pub gamma: Character,
    pub q: u64,
    pub coefficient: f64,
    /// Arc carrying all but `missed` elements of ψ(A − A).
    pub difference_arc: Arc,
    pub missed: usize,
    /// Minimal arc containing ψ(A).
    pub interval: Arc,
    pub parameters: LemmaParameters,
}

/// Scans nontrivial characters by decreasing |1̂_D(γ)| (D = A − A) and
/// returns the first whose arc passes every test.
pub fn find_concentrating_character(
    a: &GroupSet,
    params: &ModelStepParams,
    limits: &Limits,
) -> Result<Option<Concentration>> {
    let spec = a.spec();
    let d = difference_set(a, a)?;
    let spectrum = transform_indices(spec, d.indices(), limits)?;
    let rep = doubling(a)?;
    let k = rep.k_big();
    let d_density = BigRational::new(BigInt::from(d.len()), BigInt::from(spec.cardinality()));
    let parameters = lemma_parameters(&k, &d_density, &params.delta);
    // missed ≤ κ|D| = |D| |A|² / (4 |A+A|²)
    let max_missed = (BigInt::from(d.len()) * BigInt::from(rep.set_size).pow(2)
        / (BigInt::from(4) * BigInt::from(rep.sumset_size).pow(2)))
    .to_usize()
    .unwrap_or(usize::MAX);
    let need = d.len() - max_missed.min(d.len());
    let nontrivial: Vec<usize> = (1..spec.cardinality() as usize).collect();
    for g in spectrum.ranked(&nontrivial) {
        let gamma = spec.character(g);
        let psi = spec.hom_from_character(&gamma)?;
        let q = psi.target().cardinality();
        let d_vals: Vec<u64> = d.indices().iter().map(|&x| psi.apply_idx(x) as u64).collect();
        let Some(arc) = shortest_arc(&d_vals, q, need) else { continue };
        // l < δq
        if BigInt::from(arc.length) * BigInt::from(*params.delta.denom())
            >= BigInt::from(*params.delta.numer()) * BigInt::from(q)
        {
            continue;
        }
        let missed = d_vals.iter().filter(|&&v| !arc.contains(v, q)).count();
        if 2 * missed >= a.len() || 3 * arc.length >= q {
            continue;
        }
        let a_vals: Vec<u64> = a.indices().iter().map(|&x| psi.apply_idx(x) as u64).collect();
        let interval = shortest_arc(&a_vals, q, a_vals.len()).expect("nonempty");
        if interval.length > arc.length {
            continue;
        }
        return Ok(Some(Concentration {
            gamma,
            q,
            coefficient: spectrum.magnitude(g),
            difference_arc: arc,
            missed,
            interval,
            parameters,
        }));
    }
    Ok(None)
}

/// One application of θ(h + λz) = (h, λ mod (q − 1)).
#[derive(Clone, Debug)]
pub struct ShrinkStep {
    pub model: GroupSet,
    pub theta: FreimanMap,
    /// The element z with ψ(z) = 1.
    pub z: GroupElement,
    /// A was translated by this element before θ was applied.
    pub translation: GroupElement,
    /// Orders of the cyclic factors of ker ψ used as coordinates.
    pub kernel_orders: Vec<u64>,
}

pub fn shrink_model_step(
    a: &GroupSet,
    s: usize,
    gamma: &Character,
    interval: Arc,
    limits: &Limits,
) -> Result<ShrinkStep> {
    let spec = a.spec();
    if a.is_empty() {
        return Err(Error::domain("cannot shrink the empty set"));
    }
    let psi = spec.hom_from_character(gamma)?;
    let q = psi.target().cardinality();
    if 4 * s as u64 * interval.length >= q {
        return Err(Error::domain(format!("interval length {} is not below q/4s = {q}/{}", interval.length, 4 * s)));
    }
    if a.indices().iter().any(|&x| !interval.contains(psi.apply_idx(x) as u64, q)) {
        return Err(Error::domain("ψ(A) is not inside the interval"));
    }
    limits.check_enumeration("model shrink", spec.cardinality())?;
    let z = (0..spec.cardinality() as usize).find(|&x| psi.apply_idx(x) == 1).expect("ψ is onto");
    let shift = spec.scale_idx(z, -((interval.start % q) as i64));
    let kernel = spec.kernel_of_characters(std::slice::from_ref(gamma), limits)?;
    let dec = kernel.cyclic_decomposition()?;
    let mut orders: Vec<u64> = dec.orders().to_vec();
    if q > 2 {
        orders.push(q - 1);
    }
    if orders.is_empty() {
        orders.push(1);
    }
    let target = GroupSpec::new(orders)?;
    let theta_of = |x: usize| -> usize {
        let y = spec.add_idx(x, shift);
        let lambda = psi.apply_idx(y) as u64;
        let h = spec.sub_idx(y, spec.scale_idx(z, lambda as i64));
        let mut coords = dec.coords_of(h).expect("h lies in the kernel").to_vec();
        if q > 2 {
            coords.push(lambda % (q - 1));
        }
        if coords.is_empty() {
            coords.push(0);
        }
        target.index_of_coords(&coords)
    };
    let theta = FreimanMap::from_fn(a.clone(), target.clone(), theta_of);
    if !is_freiman_iso(&theta, s)? {
        return Err(Error::invariant("model shrink", format!("θ is not a Freiman {s}-isomorphism")));
    }
    Ok(ShrinkStep {
        model: theta.image_set(),
        z: spec.element(z),
        translation: spec.element(shift),
        kernel_orders: dec.orders().to_vec(),
        theta,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum StageKind {
    /// Shrink along a character.
    Character { gamma: Character, q: u64, interval: Arc, difference_arc: Arc, coefficient: f64 },
    /// Quotient of F_2^m by {0, x} with x ∉ 2A − 2A.
    Quotient { x: GroupElement, coordinate: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelStage {
    pub from: GroupSpec,
    pub to: GroupSpec,
    pub kind: StageKind,
}

#[derive(Clone, Debug)]
pub struct ModelTrace {
    pub s: usize,
    pub initial: GroupSet,
    pub stages: Vec<ModelStage>,
    pub model: GroupSet,
    /// Composite map from the initial set onto the model.
    pub map: FreimanMap,
    pub verified: bool,
    /// Whether the final density is at least the guaranteed bound; not enforced.
    pub density_bound: Status,
}

impl ModelTrace {
    fn start(a: &GroupSet, s: usize) -> Self {
        ModelTrace {
            s,
            initial: a.clone(),
            stages: Vec::new(),
            model: a.clone(),
            map: FreimanMap::identity(a.clone()),
            verified: true,
            density_bound: Status::Inconclusive,
        }
    }

    fn push(&mut self, kind: StageKind, step: &FreimanMap) -> Result<()> {
        self.stages.push(ModelStage { from: self.model.spec().clone(), to: step.target().clone(), kind });
        self.map = self.map.then(step)?;
        self.model = step.image_set();
        Ok(())
    }

    fn finish(mut self) -> Result<Self> {
        self.verified = is_freiman_iso(&self.map, self.s)?;
        if !self.verified {
            return Err(Error::invariant("model", "composite map is not a Freiman isomorphism"));
        }
        self.density_bound = model_density_status(&self.initial, self.model.spec(), self.s)?;
        Ok(self)
    }
}

/// density ≥ (10sK)^{−10K²}, i.e. |G′| ≤ (10sK)^{10K²} |A|, compared in logs.
pub fn model_density_status(a: &GroupSet, model_group: &GroupSpec, s: usize) -> Result<Status> {
    let k = doubling(a)?.k_big();
    let kf = k.to_f64().unwrap_or(f64::INFINITY);
    let lhs = (model_group.cardinality() as f64).ln() - (a.len() as f64).ln();
    let rhs = 10.0 * kf * kf * (10.0 * s as f64 * kf).ln();
    Ok(compare_logs(lhs, rhs))
}

/// Repeats character shrinks while the density is below `target` and a
/// qualifying character exists, stopping after `max_steps`.
pub fn minimize_model(
    a: &GroupSet,
    params: &ModelStepParams,
    target: Ratio<i64>,
    max_steps: usize,
    limits: &Limits,
) -> Result<ModelTrace> {
    if a.is_empty() {
        return Err(Error::domain("cannot build a model of the empty set"));
    }
    let mut trace = ModelTrace::start(a, params.s);
    while trace.stages.len() < max_steps && trace.model.density() < target {
        let Some(c) = find_concentrating_character(&trace.model, params, limits)? else { break };
        let before = trace.model.spec().cardinality();
        let step = shrink_model_step(&trace.model, params.s, &c.gamma, c.interval, limits)?;
        if step.theta.target().cardinality() >= before {
            break;
        }
        let kind = StageKind::Character {
            gamma: c.gamma,
            q: c.q,
            interval: c.interval,
            difference_arc: c.difference_arc,
            coefficient: c.coefficient,
        };
        trace.push(kind, &step.theta)?;
    }
    trace.finish()
}

/// Quotients F_2^m by elements outside 2A − 2A until 2^m ≤ K⁴|A|.
pub fn f2_shrink(a: &GroupSet, limits: &Limits) -> Result<ModelTrace> {
    if !a.spec().is_elementary_two() {
        return Err(Error::domain("f2_shrink needs a group of the form F_2^m"));
    }
    if a.is_empty() {
        return Err(Error::domain("cannot build a model of the empty set"));
    }
    let k = doubling(a)?.k_big();
    let bound = num_traits::pow(k, 4) * big(a.len() as u64);
    let mut trace = ModelTrace::start(a, 2);
    while big(trace.model.spec().cardinality()) > bound {
        let cur = trace.model.clone();
        let spec = cur.spec();
        limits.check_enumeration("F_2 quotient", spec.cardinality())?;
        let dd = iterated_sumset(&cur, 2, 2)?;
        let x = (0..spec.cardinality() as usize).find(|&x| !dd.contains_idx(x)).ok_or_else(|| {
            Error::invariant("f2_shrink", "2A − 2A is the whole group although the size bound fails")
        })?;
        let xc = spec.coords_of(x);
        let i = xc.iter().position(|&c| c == 1).expect("x is nonzero");
        let m = spec.rank();
        let target = if m > 1 { GroupSpec::elementary_two(m - 1)? } else { GroupSpec::new(vec![1])? };
        let map = FreimanMap::from_fn(cur.clone(), target.clone(), |y| {
            let yc = spec.coords_of(y);
            let mut out: Vec<u64> = (0..m).filter(|&j| j != i).map(|j| (yc[j] + yc[i] * xc[j]) % 2).collect();
            if out.is_empty() {
                out.push(0);
            }
            target.index_of_coords(&out)
        });
        if !is_freiman_iso(&map, 2)? {
            return Err(Error::invariant("f2_shrink", "quotient map is not a Freiman 2-isomorphism"));
        }
        trace.push(StageKind::Quotient { x: spec.element(x), coordinate: i }, &map)?;
    }
    trace.finish()
}

/// A model of a set of integers in Z/m.
#[derive(Clone, Debug)]
pub struct IntegerModel {
    pub m: u64,
    pub s: usize,
    /// The integers, in increasing order.
    pub integers: Vec<i64>,
    pub model: GroupSet,
    /// Reduction mod m as a map from the integers (embedded without
    /// wraparound in a large cyclic group) to Z/m.
    pub map: FreimanMap,
    /// m ≤ 100 K⁶ log K · |A|; informational.
    pub size_bound: Status,
}

/// Embeds integers into a cyclic group large enough that sA − sA does not wrap.
pub fn embed_integers(values: &[i64], s: usize) -> Result<(GroupSet, i64)> {
    if values.is_empty() {
        return Err(Error::domain("empty integer set"));
    }
    let min = *values.iter().min().unwrap();
    let max = *values.iter().max().unwrap();
    let span = (max - min) as u64;
    let n = 2 * s.max(1) as u64 * span + 1;
    let spec = GroupSpec::cyclic(n)?;
    let idx = values.iter().map(|&v| (v - min) as usize).collect();
    Ok((GroupSet::from_indices(spec, idx), min))
}

/// Smallest m ≥ 2 for which reduction mod m is a Freiman s-isomorphism on A.
pub fn z_model(values: &[i64], s: usize, limits: &Limits) -> Result<IntegerModel> {
    if s < 1 {
        return Err(Error::domain("order must be at least 1"));
    }
    let (embedded, _min) = embed_integers(values, s)?;
    limits.check_enumeration("integer model", embedded.spec().cardinality())?;
    let mut ints: Vec<i64> = values.to_vec();
    ints.sort_unstable();
    ints.dedup();
    let shifted: Vec<i64> = embedded.indices().iter().map(|&x| x as i64).collect();
    // s A − s A as a set of nonnegative differences
    let sa = iterated_sumset(&embedded, s, 0)?;
    let sums: Vec<i64> = sa.indices().iter().map(|&x| x as i64).collect();
    let top = *sums.last().unwrap();
    let mut diff = vec![false; top as usize + 1];
    for &u in &sums {
        for &v in &sums {
            if u > v {
                diff[(u - v) as usize] = true;
            }
        }
    }
    let m = (2..)
        .find(|&m: &i64| (1..).map(|k| k * m).take_while(|&t| t <= top).all(|t| !diff[t as usize]))
        .expect("m = top + 1 always works") as u64;
    let target = GroupSpec::cyclic(m)?;
    let map = FreimanMap::from_fn(embedded.clone(), target.clone(), |x| x % m as usize);
    if !is_freiman_iso(&map, s)? {
        return Err(Error::invariant("z_model", format!("reduction mod {m} is not a Freiman {s}-isomorphism")));
    }
    let model = GroupSet::from_indices(target, shifted.iter().map(|&x| (x as u64 % m) as usize).collect());
    let size_bound = integer_model_size_status(&embedded, m)?;
    Ok(IntegerModel { m, s, integers: ints, model, map, size_bound })
}

/// m ≤ 100 K⁶ log K · |A| for the embedded integers, compared in logs.
pub fn integer_model_size_status(embedded: &GroupSet, m: u64) -> Result<Status> {
    let kf = doubling(embedded)?.k_big().to_f64().unwrap_or(f64::INFINITY);
    let rhs = 100.0 * kf.powi(6) * kf.ln() * embedded.len() as f64;
    if rhs <= 0.0 {
        return Ok(Status::Fail);
    }
    Ok(compare_logs((m as f64).ln(), rhs.ln()))
}

/// True iff reduction mod m is an s-isomorphism on the integers (by DP).
pub fn reduction_is_iso(values: &[i64], s: usize, m: u64) -> Result<bool> {
    let (embedded, _) = embed_integers(values, s)?;
    let target = GroupSpec::cyclic(m)?;
    let map = FreimanMap::from_fn(embedded, target, |x| x % m as usize);
    is_freiman_iso(&map, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freiman::is_freiman_hom;

    fn lim() -> Limits {
        Limits::default()
    }

    fn e(v: &[u64]) -> GroupElement {
        GroupElement::new(v.to_vec())
    }

    #[test]
    fn arcs() {
        assert_eq!(shortest_arc(&[998, 999, 0, 1, 2], 1000, 5), Some(Arc { start: 998, length: 4 }));
        assert_eq!(shortest_arc(&[0, 1, 2], 1000, 3), Some(Arc { start: 0, length: 2 }));
        assert_eq!(shortest_arc(&[5, 5, 9], 10, 2), Some(Arc { start: 5, length: 0 }));
        // ties between equal lengths go to the smaller start
        assert_eq!(shortest_arc(&[1, 2, 6, 7], 10, 2), Some(Arc { start: 1, length: 1 }));
        assert_eq!(shortest_arc(&[1], 10, 2), None);
    }

    /// Oracle for the arc search: try every start and length.
    fn brute_arc(values: &[u64], q: u64, need: usize) -> Option<Arc> {
        for l in 0..q {
            for b in 0..q {
                let arc = Arc { start: b, length: l };
                if values.iter().filter(|&&v| arc.contains(v, q)).count() >= need {
                    return Some(arc);
                }
            }
        }
        None
    }

    #[test]
    fn arc_search_matches_brute_force() {
        for seed in 0u64..60 {
            let q = 5 + seed % 13;
            let vals: Vec<u64> = (0..(3 + seed % 5)).map(|i| (seed * 31 + i * i * 7 + i) % q).collect();
            for need in 1..=vals.len() {
                let fast = shortest_arc(&vals, q, need).unwrap();
                let slow = brute_arc(&vals, q, need).unwrap();
                assert_eq!(fast.length, slow.length, "seed {seed} need {need}");
                assert_eq!(fast.start % q, slow.start, "seed {seed} need {need}");
            }
        }
    }

    #[test]
    fn concentration_on_short_interval() {
        let a = GroupSet::cyclic(1000, &[0, 1, 2]).unwrap();
        let c = find_concentrating_character(&a, &ModelStepParams::new(2).unwrap(), &lim()).unwrap().unwrap();
        assert_eq!(c.gamma, Character::new(vec![1]));
        assert_eq!(c.q, 1000);
        assert_eq!(c.interval, Arc { start: 0, length: 2 });
        assert_eq!(c.difference_arc, Arc { start: 998, length: 4 });
    }

    #[test]
    fn whole_group_has_no_concentration() {
        let a = GroupSet::whole(GroupSpec::new(vec![3, 4]).unwrap());
        assert!(find_concentrating_character(&a, &ModelStepParams::new(2).unwrap(), &lim()).unwrap().is_none());
        let t = minimize_model(&a, &ModelStepParams::new(2).unwrap(), Ratio::from_integer(1), 10, &lim()).unwrap();
        assert!(t.stages.is_empty());
    }

    #[test]
    fn subgroup_concentrates_at_zero() {
        let a = GroupSet::cyclic(12, &[0, 3, 6, 9]).unwrap();
        let c = find_concentrating_character(&a, &ModelStepParams::new(2).unwrap(), &lim()).unwrap().unwrap();
        assert_eq!(c.interval.length, 0);
        assert!(a.indices().iter().all(|&x| (c.gamma.coords()[0] as usize * x).is_multiple_of(12)));
    }

    #[test]
    fn shrink_interval_into_smaller_cycle() {
        let a = GroupSet::cyclic(1000, &[0, 1, 2]).unwrap();
        let step = shrink_model_step(&a, 2, &Character::new(vec![1]), Arc { start: 0, length: 2 }, &lim()).unwrap();
        assert_eq!(step.model, GroupSet::cyclic(999, &[0, 1, 2]).unwrap());
        assert_eq!(step.z, e(&[1]));
        assert!(is_freiman_iso(&step.theta, 2).unwrap());
    }

    #[test]
    fn shrink_rejects_long_interval() {
        let a = GroupSet::cyclic(16, &[0, 1, 2]).unwrap();
        let r = shrink_model_step(&a, 2, &Character::new(vec![1]), Arc { start: 0, length: 2 }, &lim());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn shrink_inside_kernel() {
        // A ⊆ ker γ: every λ is 0
        let g = GroupSpec::new(vec![4, 6]).unwrap();
        let a = GroupSet::new(g.clone(), &[e(&[0, 0]), e(&[1, 0]), e(&[3, 0])]).unwrap();
        let gamma = Character::new(vec![0, 1]);
        let step = shrink_model_step(&a, 2, &gamma, Arc { start: 0, length: 0 }, &lim()).unwrap();
        assert_eq!(step.model.spec().orders(), &[4, 5]);
        assert!(step.model.elements().iter().all(|x| x.coords()[1] == 0));

        // q = 2: the Z/1 factor is dropped
        let gamma = Character::new(vec![0, 3]);
        let step = shrink_model_step(&a, 2, &gamma, Arc { start: 0, length: 0 }, &lim()).unwrap();
        assert_eq!(step.model.spec().cardinality(), 12);
        assert_eq!(step.model.len(), 3);
    }

    #[test]
    fn shrink_with_translation() {
        let a = GroupSet::cyclic(1000, &[500, 501, 503]).unwrap();
        let step = shrink_model_step(&a, 3, &Character::new(vec![1]), Arc { start: 500, length: 3 }, &lim()).unwrap();
        assert_eq!(step.model, GroupSet::cyclic(999, &[0, 1, 3]).unwrap());
        assert!(is_freiman_iso(&step.theta, 3).unwrap());
    }

    #[test]
    fn minimize_interval() {
        let a = GroupSet::cyclic(1000, &[0, 1, 2]).unwrap();
        let t = minimize_model(&a, &ModelStepParams::new(2).unwrap(), Ratio::from_integer(1), 64, &lim()).unwrap();
        assert!(!t.stages.is_empty());
        assert!(t.model.spec().cardinality() <= 999);
        assert!(t.model.density() > a.density());
        assert!(t.verified && is_freiman_iso(&t.map, 2).unwrap());
        // each stage strictly shrinks the group
        for st in &t.stages {
            assert!(st.to.cardinality() < st.from.cardinality());
        }
    }

    #[test]
    fn minimize_subgroup() {
        let a = GroupSet::cyclic(24, &[0, 6, 12, 18]).unwrap();
        let t = minimize_model(&a, &ModelStepParams::new(2).unwrap(), Ratio::from_integer(1), 64, &lim()).unwrap();
        assert!(t.model.density() > a.density());
        assert!(is_freiman_iso(&t.map, 2).unwrap());
    }

    #[test]
    fn f2_examples() {
        let g = GroupSpec::elementary_two(4).unwrap();
        let a = GroupSet::new(g, &[e(&[1, 0, 0, 0]), e(&[0, 1, 0, 0])]).unwrap();
        let t = f2_shrink(&a, &lim()).unwrap();
        assert_eq!(t.model.spec().cardinality(), 2);
        assert_eq!(t.model.len(), 2);
        assert_eq!(t.stages.len(), 3);

        let all = GroupSet::whole(GroupSpec::elementary_two(3).unwrap());
        assert!(f2_shrink(&all, &lim()).unwrap().stages.is_empty());

        let g3 = GroupSpec::elementary_two(3).unwrap();
        let basis = GroupSet::new(g3, &[e(&[1, 0, 0]), e(&[0, 1, 0]), e(&[0, 0, 1])]).unwrap();
        assert!(f2_shrink(&basis, &lim()).unwrap().stages.is_empty());
        assert!(matches!(f2_shrink(&GroupSet::cyclic(4, &[1]).unwrap(), &lim()), Err(Error::Domain(_))));
    }

    #[test]
    fn f2_final_size_bound() {
        let g = GroupSpec::elementary_two(6).unwrap();
        let a = GroupSet::new(g, &[e(&[0, 0, 0, 0, 0, 0]), e(&[1, 1, 0, 0, 0, 0]), e(&[0, 0, 1, 0, 1, 0]), e(&[1, 0, 0, 1, 0, 1])]).unwrap();
        let t = f2_shrink(&a, &lim()).unwrap();
        let k = doubling(&a).unwrap().k_big();
        assert!(big(t.model.spec().cardinality()) <= num_traits::pow(k, 4) * big(4));
        assert!(is_freiman_hom(&t.map, 2).unwrap().holds);
    }

    #[test]
    fn integer_models() {
        assert_eq!(z_model(&[0, 1, 2], 2, &lim()).unwrap().m, 5);
        assert_eq!(z_model(&[0], 2, &lim()).unwrap().m, 2);
        // 2A − 2A = {0, ±12, ±24}: the smallest m dividing neither 12 nor 24 is 5
        let zm = z_model(&[0, 12], 2, &lim()).unwrap();
        assert_eq!(zm.m, 5);
    }

    #[test]
    fn integer_model_minimality_by_dp() {
        for set in [vec![0, 1, 2], vec![0, 1, 5], vec![-3, 0, 4, 9], vec![0, 30]] {
            let zm = z_model(&set, 2, &lim()).unwrap();
            assert!(reduction_is_iso(&set, 2, zm.m).unwrap());
            for m in 2..zm.m {
                assert!(!reduction_is_iso(&set, 2, m).unwrap(), "{set:?} m {m}");
            }
        }
    }
}
