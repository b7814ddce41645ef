//! Bohr sets, successive minima of the associated lattice, and extraction of
//! a proper coset progression from a Bohr set.
//!
//! For characters γ_1..γ_d the map x ↦ (arg γ_j(x)/2π)_j sends G into the
//! torus; Λ = φ(G) + Z^d is a lattice of determinant |H|/|G| where H is the
//! joint kernel. All lattice vectors are handled as integer vectors over the
//! common denominator `exponent(G)`, so every comparison is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::check::{big, big_ratio, fmt_rational, Check};
use crate::error::{Error, Result};
use crate::fourier::BohrSpec;
use crate::group::{Character, GroupElement, GroupSpec, Limits, Subgroup};
use crate::set::GroupSet;

/// Exact Bohr membership: every character argument within circular distance ρ of 0.
pub fn bohr_set(bohr: &BohrSpec, spec: &GroupSpec, limits: &Limits) -> Result<GroupSet> {
    for g in &bohr.characters {
        spec.check_character(g)?;
    }
    limits.check_enumeration("Bohr set", spec.cardinality())?;
    let chars: Vec<usize> = bohr.characters.iter().map(|g| spec.index_of_coords(g.coords())).collect();
    let members = (0..spec.cardinality() as usize)
        .filter(|&x| chars.iter().all(|&g| within_radius(spec, g, x, &bohr.radius)))
        .collect();
    Ok(GroupSet::from_indices(spec.clone(), members))
}

pub(crate) fn within_radius(spec: &GroupSpec, gamma: usize, x: usize, radius: &Ratio<i64>) -> bool {
    let e = spec.exponent() as i128;
    let r = spec.arg_numerator_idx(gamma, x) as i128;
    let dist = r.min(e - r);
    dist * (*radius.denom() as i128) <= (*radius.numer() as i128) * e
}

/// Centered lift of the argument vector: numerators over `exponent(G)` in
/// (−e/2, e/2].
fn centered_lift(spec: &GroupSpec, chars: &[usize], x: usize) -> Vec<i64> {
    let e = spec.exponent() as i64;
    chars
        .iter()
        .map(|&g| {
            let r = spec.arg_numerator_idx(g, x) as i64;
            if 2 * r > e {
                r - e
            } else {
                r
            }
        })
        .collect()
}

/// Successive minima of the unit max-norm cube with respect to Λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimaReport {
    /// Characters the lattice was built from (trivial ones stripped).
    pub characters: Vec<Character>,
    pub stripped_trivial: usize,
    /// Common denominator of all vector coordinates and minima.
    pub denominator: i64,
    pub minima: Vec<Ratio<i64>>,
    /// Attaining vectors b_j as integer numerators over `denominator`.
    pub vectors: Vec<Vec<i64>>,
    /// Group elements v_j with φ(v_j) ≡ b_j mod Z^d.
    pub preimages: Vec<GroupElement>,
    pub kernel_size: u64,
    pub group_size: u64,
}

impl MinimaReport {
    pub fn dimension(&self) -> usize {
        self.characters.len()
    }

    /// det(Λ) = |H| / |G|.
    pub fn determinant(&self) -> BigRational {
        BigRational::new(BigInt::from(self.kernel_size), BigInt::from(self.group_size))
    }

    pub fn minima_product(&self) -> BigRational {
        self.minima.iter().fold(BigRational::one(), |acc, l| acc * big_ratio(l))
    }

    /// λ_1 ⋯ λ_d ≤ |H|/|G|.
    pub fn minkowski_check(&self) -> Check {
        Check::le("bohr.minkowski", &self.minima_product(), &self.determinant())
    }

    /// Re-derives every structural claim of the report from the group alone:
    /// each b_j is a lattice vector lifting φ(v_j), has norm at most λ_j, the
    /// minima are sorted, and the b_j are linearly independent.
    pub fn verify(&self, spec: &GroupSpec) -> Vec<Check> {
        let mut checks = vec![self.minkowski_check()];
        let chars: Vec<usize> = self.characters.iter().map(|g| spec.index_of_coords(g.coords())).collect();
        let den = self.denominator;
        let mut lifts_ok = den == spec.exponent() as i64 && self.vectors.len() == self.dimension();
        let mut norms_ok = self.minima.len() == self.dimension();
        for (j, (b, v)) in self.vectors.iter().zip(&self.preimages).enumerate() {
            if spec.check_element(v).is_err() || b.len() != chars.len() {
                lifts_ok = false;
                continue;
            }
            let lift = centered_lift(spec, &chars, spec.index(v));
            if b.iter().zip(&lift).any(|(bi, li)| (bi - li).rem_euclid(den) != 0) {
                lifts_ok = false;
            }
            let norm = b.iter().map(|x| x.abs()).max().unwrap_or(0);
            if let Some(l) = self.minima.get(j) {
                if Ratio::new(norm, den) > *l {
                    norms_ok = false;
                }
            }
        }
        let sorted = self.minima.windows(2).all(|w| w[0] <= w[1]);
        checks.push(Check::predicate("bohr.minima_lift", lifts_ok, self.vectors.len(), self.dimension()));
        checks.push(Check::predicate("bohr.minima_norms", norms_ok && sorted, self.minima.len(), "norm<=lambda"));
        let det = integer_determinant(&self.vectors);
        checks.push(Check::predicate("bohr.minima_independent", !det.is_zero(), det, "nonzero"));
        checks
    }
}

/// Echelon basis over Q kept as primitive integer rows.
struct Echelon {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    /// Inserts `v` if it is independent of the current rows.
    fn insert(&mut self, v: &[i64]) -> bool {
        let mut w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let a = row[*p].clone();
            let b = w[*p].clone();
            for (wi, ri) in w.iter_mut().zip(row) {
                *wi = &a * &*wi - &b * ri;
            }
            normalize(&mut w);
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, w));
                true
            }
            None => false,
        }
    }
}

fn normalize(w: &mut [BigInt]) {
    let g = w.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in w.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Determinant of a square integer matrix (fraction-free elimination).
pub fn integer_determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    if rows.iter().any(|r| r.len() != n) {
        return BigInt::zero();
    }
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn successive_minima(chars: &[Character], spec: &GroupSpec, limits: &Limits) -> Result<MinimaReport> {
    for g in chars {
        spec.check_character(g)?;
    }
    limits.check_enumeration("lattice enumeration", spec.cardinality())?;
    let kept: Vec<Character> = chars.iter().filter(|g| !g.is_trivial()).cloned().collect();
    let stripped_trivial = chars.len() - kept.len();
    let d = kept.len();
    if d == 0 {
        return Err(Error::domain("successive minima need at least one nontrivial character"));
    }
    if d > limits.dissociativity {
        return Err(Error::Resource { what: "lattice dimension".into(), needed: d as u64, cap: limits.dissociativity as u64 });
    }
    let idx: Vec<usize> = kept.iter().map(|g| spec.index_of_coords(g.coords())).collect();
    let e = spec.exponent() as i64;

    // one representative (the lexicographically first x) per point of φ(G)
    let mut reps: std::collections::HashMap<Vec<i64>, usize> = std::collections::HashMap::new();
    let mut order: Vec<Vec<i64>> = Vec::new();
    let mut kernel_size = 0u64;
    for x in 0..spec.cardinality() as usize {
        let c = centered_lift(spec, &idx, x);
        if c.iter().all(|&v| v == 0) {
            kernel_size += 1;
        }
        if !reps.contains_key(&c) {
            reps.insert(c.clone(), x);
            order.push(c);
        }
    }

    // every lattice vector of norm ≤ 1 is a centered lift plus a shift in {−1,0,1}^d
    let shifts = 3usize.pow(d as u32);
    let mut candidates: Vec<(i64, usize, usize, Vec<i64>)> = Vec::new();
    for c in &order {
        let x = reps[c];
        for code in 0..shifts {
            let mut rem = code;
            let w: Vec<i64> = c
                .iter()
                .map(|&ci| {
                    let z = (rem % 3) as i64 - 1;
                    rem /= 3;
                    ci + z * e
                })
                .collect();
            let norm = w.iter().map(|v| v.abs()).max().unwrap();
            if norm == 0 || norm > e {
                continue;
            }
            candidates.push((norm, x, code, w));
        }
    }
    candidates.sort();

    let mut echelon = Echelon::new();
    let mut minima = Vec::with_capacity(d);
    let mut vectors = Vec::with_capacity(d);
    let mut preimages = Vec::with_capacity(d);
    for (norm, x, _, w) in &candidates {
        if echelon.insert(w) {
            minima.push(Ratio::new(*norm, e));
            vectors.push(w.clone());
            preimages.push(spec.element(*x));
            if minima.len() == d {
                break;
            }
        }
    }
    if minima.len() != d {
        return Err(Error::invariant("successive minima", "unit vectors failed to complete a basis"));
    }
    Ok(MinimaReport {
        characters: kept,
        stripped_trivial,
        denominator: e,
        minima,
        vectors,
        preimages,
        kernel_size,
        group_size: spec.cardinality(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgressionGenerator {
    pub element: GroupElement,
    pub lo: i64,
    pub hi: i64,
}

impl ProgressionGenerator {
    pub fn range_size(&self) -> u64 {
        (self.hi - self.lo + 1).max(0) as u64
    }
}

/// P + H with P = {base + Σ l_j v_j : lo_j ≤ l_j ≤ hi_j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetProgression {
    spec: GroupSpec,
    base: GroupElement,
    generators: Vec<ProgressionGenerator>,
    subgroup: Subgroup,
    symmetric: bool,
    proper: bool,
}

impl CosetProgression {
    /// Builds the progression and determines properness by counting.
    pub fn new(
        spec: GroupSpec,
        base: GroupElement,
        generators: Vec<ProgressionGenerator>,
        subgroup: Subgroup,
        limits: &Limits,
    ) -> Result<Self> {
        let mut cp = Self::from_parts(spec, base, generators, subgroup, false)?;
        cp.proper = cp.properness_check(limits)?;
        Ok(cp)
    }

    /// Assembles a progression with a caller-supplied properness flag, as read
    /// from a file. Use [`CosetProgression::properness_check`] to confirm it.
    pub fn from_parts(
        spec: GroupSpec,
        base: GroupElement,
        generators: Vec<ProgressionGenerator>,
        subgroup: Subgroup,
        proper: bool,
    ) -> Result<Self> {
        spec.check_element(&base)?;
        for g in &generators {
            spec.check_element(&g.element)?;
            if g.lo > g.hi {
                return Err(Error::domain(format!("empty generator range [{}, {}]", g.lo, g.hi)));
            }
        }
        if subgroup.ambient() != &spec {
            return Err(Error::structural("subgroup lives in a different group"));
        }
        let symmetric = generators.iter().all(|g| g.lo == -g.hi);
        Ok(CosetProgression { spec, base, generators, subgroup, symmetric, proper })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn base(&self) -> &GroupElement {
        &self.base
    }

    pub fn generators(&self) -> &[ProgressionGenerator] {
        &self.generators
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    /// |H| · Π (range sizes): the size if all formal sums were distinct.
    pub fn formal_size(&self) -> BigInt {
        self.generators
            .iter()
            .fold(BigInt::from(self.subgroup.cardinality()), |acc, g| acc * BigInt::from(g.range_size()))
    }

    pub fn materialize(&self, limits: &Limits) -> Result<GroupSet> {
        limits.check_enumeration("progression materialization", self.spec.cardinality())?;
        let spec = &self.spec;
        let n = spec.cardinality() as usize;
        let base = spec.index(&self.base);
        let mut current: Vec<usize> =
            self.subgroup.element_indices().iter().map(|&h| spec.add_idx(h, base)).collect();
        let mut seen = vec![false; n];
        for gen in &self.generators {
            let v = spec.index(&gen.element);
            let steps: Vec<usize> = (gen.lo..=gen.hi).map(|l| spec.scale_idx(v, l)).collect();
            seen.iter_mut().for_each(|s| *s = false);
            let mut next = Vec::new();
            for &x in &current {
                for &s in &steps {
                    let y = spec.add_idx(x, s);
                    if !seen[y] {
                        seen[y] = true;
                        next.push(y);
                    }
                }
            }
            current = next;
        }
        Ok(GroupSet::from_indices(spec.clone(), current))
    }

    /// Proper iff the materialized set has the formal size.
    pub fn properness_check(&self, limits: &Limits) -> Result<bool> {
        let formal = self.formal_size();
        if formal > BigInt::from(self.spec.cardinality()) {
            return Ok(false);
        }
        Ok(BigInt::from(self.materialize(limits)?.len()) == formal)
    }

    /// The same set written with one-sided ranges [0, L_j): the base moves by
    /// Σ lo_j v_j.
    pub fn to_one_sided(&self) -> CosetProgression {
        let spec = &self.spec;
        let mut base = spec.index(&self.base);
        let generators = self
            .generators
            .iter()
            .map(|g| {
                base = spec.add_idx(base, spec.scale_idx(spec.index(&g.element), g.lo));
                ProgressionGenerator { element: g.element.clone(), lo: 0, hi: g.hi - g.lo }
            })
            .collect::<Vec<_>>();
        CosetProgression {
            spec: spec.clone(),
            base: spec.element(base),
            symmetric: generators.iter().all(|g| g.hi == 0),
            generators,
            subgroup: self.subgroup.clone(),
            proper: self.proper,
        }
    }
}

/// Result of extracting P + H from a Bohr set.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub progression: CosetProgression,
    pub minima: Option<MinimaReport>,
    pub radius: Ratio<i64>,
    /// Dimension used in the size bound (nontrivial characters).
    pub dimension: usize,
    pub checks: Vec<Check>,
}

/// (ρ/d)^d |G|, with the d = 0 convention (ρ/0)^0 = 1.
pub fn extraction_size_bound(radius: &Ratio<i64>, d: usize, group_size: u64) -> BigRational {
    if d == 0 {
        return big(group_size);
    }
    let base = big_ratio(radius) / big(d as u64);
    num_traits::pow(base, d) * big(group_size)
}

pub fn progression_from_bohr(bohr: &BohrSpec, spec: &GroupSpec, limits: &Limits) -> Result<Extraction> {
    let rho = bohr.radius;
    if rho <= Ratio::from_integer(0) || rho >= Ratio::new(1, 4) {
        return Err(Error::domain(format!("radius {rho} outside (0, 1/4)")));
    }
    for g in &bohr.characters {
        spec.check_character(g)?;
    }
    let kept: Vec<Character> = bohr.characters.iter().filter(|g| !g.is_trivial()).cloned().collect();
    let d = kept.len();
    let subgroup = spec.kernel_of_characters(&kept, limits)?;
    let (generators, minima) = if d == 0 {
        (Vec::new(), None)
    } else {
        let report = successive_minima(&kept, spec, limits)?;
        let gens = report
            .minima
            .iter()
            .zip(&report.preimages)
            .map(|(lambda, v)| {
                // L_j = floor(ρ / (d λ_j))
                let l = (big_ratio(&rho) / (big(d as u64) * big_ratio(lambda))).floor().to_integer();
                let l: i64 = l.try_into().expect("range fits in i64");
                ProgressionGenerator { element: v.clone(), lo: -l, hi: l }
            })
            .collect();
        (gens, Some(report))
    };
    let progression = CosetProgression::new(spec.clone(), spec.zero(), generators, subgroup, limits)?;
    let checks = extraction_checks(&progression, &BohrSpec { characters: kept, radius: rho }, d, minima.as_ref(), limits)?;
    if let Some(bad) = checks.iter().find(|c| !c.passed()) {
        return Err(Error::invariant("progression extraction", format!("{bad}")));
    }
    Ok(Extraction { progression, minima, radius: rho, dimension: d, checks })
}

/// Containment in the Bohr set, properness, the size lower bound and (when a
/// lattice was used) Minkowski's inequality.
pub fn extraction_checks(
    cp: &CosetProgression,
    bohr: &BohrSpec,
    d: usize,
    minima: Option<&MinimaReport>,
    limits: &Limits,
) -> Result<Vec<Check>> {
    let spec = cp.spec();
    let set = cp.materialize(limits)?;
    let b = bohr_set(bohr, spec, limits)?;
    let proper = cp.properness_check(limits)?;
    let mut checks = vec![
        Check::predicate("bohr.progression_in_bohr", set.is_subset(&b), set.len(), b.len()),
        Check::predicate("bohr.progression_proper", proper && cp.is_proper() == proper, set.len(), cp.formal_size()),
        Check::le(
            "bohr.progression_size",
            &extraction_size_bound(&bohr.radius, d, spec.cardinality()),
            &big(set.len() as u64),
        ),
    ];
    if let Some(m) = minima {
        checks.extend(m.verify(spec));
    }
    Ok(checks)
}

pub fn fmt_minima(m: &MinimaReport) -> String {
    m.minima.iter().map(|l| fmt_rational(&big_ratio(l))).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn chi(c: &[u64]) -> Character {
        Character::new(c.to_vec())
    }

    #[test]
    fn bohr_set_examples() {
        let z101 = GroupSpec::cyclic(101).unwrap();
        let b = bohr_set(&BohrSpec::new(vec![chi(&[1])], Ratio::new(1, 5)).unwrap(), &z101, &lim()).unwrap();
        assert_eq!(b, GroupSet::cyclic(101, &(-20..=20).collect::<Vec<_>>()).unwrap());

        let g = GroupSpec::new(vec![2, 4]).unwrap();
        let gamma = chi(&[1, 2]);
        let b = bohr_set(&BohrSpec::new(vec![gamma.clone()], Ratio::new(2, 5)).unwrap(), &g, &lim()).unwrap();
        let ker = g.kernel_of_characters(&[gamma], &lim()).unwrap();
        assert_eq!(b.indices(), ker.element_indices());

        let b = bohr_set(&BohrSpec::new(vec![], Ratio::new(1, 100)).unwrap(), &g, &lim()).unwrap();
        assert_eq!(b.len(), 8);
    }

    #[test]
    fn minima_cyclic_prime() {
        let z5 = GroupSpec::cyclic(5).unwrap();
        let m = successive_minima(&[chi(&[1])], &z5, &lim()).unwrap();
        assert_eq!(m.minima, vec![Ratio::new(1, 5)]);
        assert_eq!(m.vectors, vec![vec![1]]);
        assert_eq!(m.preimages, vec![GroupElement::new(vec![1])]);
        assert_eq!(m.determinant(), BigRational::new(1.into(), 5.into()));
        assert!(m.verify(&z5).iter().all(|c| c.passed()));
    }

    #[test]
    fn minima_with_kernel() {
        let z8 = GroupSpec::cyclic(8).unwrap();
        let m = successive_minima(&[chi(&[2])], &z8, &lim()).unwrap();
        // lifts of 2x/8: 0, 1/4, 1/2, −1/4, 0, ...; smallest nonzero norm 1/4 at x = 1
        assert_eq!(m.minima, vec![Ratio::new(1, 4)]);
        assert_eq!(m.preimages, vec![GroupElement::new(vec![1])]);
        assert_eq!(m.kernel_size, 2);
        assert_eq!(m.determinant(), BigRational::new(1.into(), 4.into()));
        assert!(m.minkowski_check().passed());
    }

    #[test]
    fn minima_reject_all_trivial() {
        let z8 = GroupSpec::cyclic(8).unwrap();
        assert!(matches!(successive_minima(&[chi(&[0])], &z8, &lim()), Err(Error::Domain(_))));
        let m = successive_minima(&[chi(&[0]), chi(&[1])], &z8, &lim()).unwrap();
        assert_eq!(m.stripped_trivial, 1);
        assert_eq!(m.dimension(), 1);
    }

    #[test]
    fn extraction_one_dimensional() {
        let z101 = GroupSpec::cyclic(101).unwrap();
        let ex = progression_from_bohr(&BohrSpec::new(vec![chi(&[1])], Ratio::new(1, 5)).unwrap(), &z101, &lim()).unwrap();
        assert_eq!(ex.progression.generators()[0].hi, 20);
        let set = ex.progression.materialize(&lim()).unwrap();
        assert_eq!(set, GroupSet::cyclic(101, &(-20..=20).collect::<Vec<_>>()).unwrap());
        assert!(ex.progression.is_proper());
    }

    #[test]
    fn extraction_with_kernel() {
        let z8 = GroupSpec::cyclic(8).unwrap();
        let ex = progression_from_bohr(&BohrSpec::new(vec![chi(&[2])], Ratio::new(1, 5)).unwrap(), &z8, &lim()).unwrap();
        assert_eq!(ex.progression.generators()[0].hi, 0);
        assert_eq!(ex.progression.materialize(&lim()).unwrap(), GroupSet::cyclic(8, &[0, 4]).unwrap());
    }

    #[test]
    fn extraction_in_two_torsion() {
        let g = GroupSpec::elementary_two(4).unwrap();
        let chars = vec![chi(&[1, 0, 1, 0]), chi(&[0, 1, 1, 1])];
        let ex = progression_from_bohr(&BohrSpec::new(chars.clone(), Ratio::new(1, 6)).unwrap(), &g, &lim()).unwrap();
        let h = g.kernel_of_characters(&chars, &lim()).unwrap();
        assert!(ex.progression.generators().iter().all(|gen| gen.hi == 0));
        assert_eq!(ex.progression.materialize(&lim()).unwrap().indices(), h.element_indices());
    }

    #[test]
    fn extraction_rejects_large_radius() {
        let z8 = GroupSpec::cyclic(8).unwrap();
        let e = progression_from_bohr(&BohrSpec::new(vec![chi(&[1])], Ratio::new(1, 4)).unwrap(), &z8, &lim());
        assert!(matches!(e, Err(Error::Domain(_))));
    }

    #[test]
    fn properness_examples() {
        let z8 = GroupSpec::cyclic(8).unwrap();
        let h = Subgroup::trivial(&z8);
        let gen = |hi| vec![ProgressionGenerator { element: GroupElement::new(vec![1]), lo: 0, hi }];
        let p = CosetProgression::new(z8.clone(), z8.zero(), gen(7), h.clone(), &lim()).unwrap();
        assert!(p.is_proper());
        assert_eq!(p.materialize(&lim()).unwrap().len(), 8);
        let p = CosetProgression::new(z8.clone(), z8.zero(), gen(8), h, &lim()).unwrap();
        assert!(!p.is_proper());
    }

    #[test]
    fn one_sided_form_has_same_elements() {
        let z101 = GroupSpec::cyclic(101).unwrap();
        let ex = progression_from_bohr(&BohrSpec::new(vec![chi(&[3])], Ratio::new(1, 7)).unwrap(), &z101, &lim()).unwrap();
        let one = ex.progression.to_one_sided();
        assert_eq!(one.generators()[0].lo, 0);
        assert_eq!(one.materialize(&lim()).unwrap(), ex.progression.materialize(&lim()).unwrap());
    }

    #[test]
    fn determinant_of_small_matrices() {
        assert_eq!(integer_determinant(&[vec![2, 1], vec![1, 3]]), BigInt::from(5));
        assert_eq!(integer_determinant(&[vec![1, 2], vec![2, 4]]), BigInt::from(0));
        assert_eq!(integer_determinant(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 7]]), BigInt::from(-7));
        let _ = Signed::abs(&BigInt::from(1));
    }
}
