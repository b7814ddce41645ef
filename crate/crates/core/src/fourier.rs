//! Fourier analysis of indicator functions on finite abelian groups.
//!
//! Transforms use the convention f̂(γ) = E_x f(x) γ(x) with normalized
//! counting measure. Spectra are floating point; everything downstream that
//! a containment claim depends on (Bohr membership, sumsets) is exact.

use std::collections::{HashMap, HashSet};
use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;

use crate::bohr::bohr_set;
use crate::check::{big_ratio, fmt_rational, ln_rational, Check};
use crate::error::{Error, Result};
use crate::group::{Character, GroupSpec, Limits};
use crate::set::GroupSet;
use crate::sumset::{doubling, iterated_sumset};

/// Relative tolerance for floating-point spectral identities.
pub const EPS_NUM: f64 = 1e-9;

/// Base of the logarithm in Chang-type bounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LogBase {
    #[default]
    Natural,
    Binary,
}

impl LogBase {
    pub fn log(&self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Binary => x.log2(),
        }
    }

    pub fn log_rational(&self, r: &BigRational) -> f64 {
        match self {
            LogBase::Natural => ln_rational(r),
            LogBase::Binary => ln_rational(r) / std::f64::consts::LN_2,
        }
    }
}

/// Unit-circle lookup table for arguments r / n, built so that entries for
/// r and n − r are exact conjugates.
struct Twiddles {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Twiddles {
    fn new(n: usize) -> Self {
        let mut cos = vec![0.0; n];
        let mut sin = vec![0.0; n];
        for r in 0..n {
            if 4 * r == n {
                (cos[r], sin[r]) = (0.0, 1.0);
            } else if 2 * r == n {
                (cos[r], sin[r]) = (-1.0, 0.0);
            } else if 2 * r < n {
                let t = TAU * r as f64 / n as f64;
                cos[r] = t.cos();
                sin[r] = t.sin();
            } else {
                cos[r] = cos[n - r];
                sin[r] = -sin[n - r];
            }
        }
        Twiddles { cos, sin }
    }
}

/// Value of a character at a point as a complex number (re, im).
pub fn char_value(spec: &GroupSpec, gamma: usize, x: usize) -> (f64, f64) {
    let e = spec.exponent();
    let r = spec.arg_numerator_idx(gamma, x);
    let t = TAU * r as f64 / e as f64;
    (t.cos(), t.sin())
}

/// The full table of Fourier coefficients of an indicator function.
#[derive(Clone, Debug)]
pub struct Spectrum {
    spec: GroupSpec,
    values: Vec<(f64, f64)>,
    set_size: usize,
}

impl Spectrum {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// α = |A| / |G|.
    pub fn density(&self) -> Ratio<i64> {
        Ratio::new(self.set_size as i64, self.spec.cardinality() as i64)
    }

    pub fn density_f64(&self) -> f64 {
        self.set_size as f64 / self.spec.cardinality() as f64
    }

    pub fn value(&self, gamma: usize) -> (f64, f64) {
        self.values[gamma]
    }

    pub fn magnitude(&self, gamma: usize) -> f64 {
        let (re, im) = self.values[gamma];
        re.hypot(im)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Σ_γ |f̂(γ)|².
    pub fn plancherel_sum(&self) -> f64 {
        self.values.iter().map(|(re, im)| re * re + im * im).sum()
    }

    /// Σ_γ |f̂(γ)|⁴.
    pub fn fourth_moment(&self) -> f64 {
        self.values.iter().map(|(re, im)| (re * re + im * im).powi(2)).sum()
    }

    /// Σ_γ f̂(γ) conj(γ(x)); reconstructs the indicator at x.
    pub fn inversion_at(&self, x: usize) -> f64 {
        let e = self.spec.exponent();
        let tw = Twiddles::new(e as usize);
        (0..self.values.len())
            .map(|g| {
                let r = self.spec.arg_numerator_idx(g, x) as usize;
                let (re, im) = self.values[g];
                // real part of (re + i im)(cos − i sin)
                re * tw.cos[r] + im * tw.sin[r]
            })
            .sum()
    }

    /// Largest deviation from 1̂(−γ) = conj(1̂(γ)).
    pub fn conjugate_symmetry_error(&self) -> f64 {
        (0..self.values.len())
            .map(|g| {
                let (re, im) = self.values[g];
                let (re2, im2) = self.values[self.spec.neg_idx(g)];
                (re - re2).abs().max((im + im2).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Sort key used whenever characters are ranked by coefficient size:
    /// descending magnitude at 1e-9 resolution relative to the density, then
    /// lexicographic.
    fn rank_key(&self, gamma: usize) -> (i64, usize) {
        let alpha = self.density_f64().max(f64::MIN_POSITIVE);
        (-((self.magnitude(gamma) / alpha) * 1e9).round() as i64, gamma)
    }

    pub fn ranked(&self, characters: &[usize]) -> Vec<usize> {
        let mut out = characters.to_vec();
        out.sort_by_key(|&g| self.rank_key(g));
        out
    }
}

pub fn indicator_transform(a: &GroupSet, limits: &Limits) -> Result<Spectrum> {
    transform_indices(a.spec(), a.indices(), limits)
}

pub(crate) fn transform_indices(spec: &GroupSpec, set: &[usize], limits: &Limits) -> Result<Spectrum> {
    limits.check_enumeration("Fourier transform", spec.cardinality())?;
    let n = spec.cardinality() as usize;
    let tw = Twiddles::new(spec.exponent() as usize);
    let scale = 1.0 / n as f64;
    let values = (0..n)
        .map(|g| {
            let (mut re, mut im) = (0.0, 0.0);
            for &x in set {
                let r = spec.arg_numerator_idx(g, x) as usize;
                re += tw.cos[r];
                im += tw.sin[r];
            }
            (re * scale, im * scale)
        })
        .collect();
    Ok(Spectrum { spec: spec.clone(), values, set_size: set.len() })
}

/// The m-fold convolution 1_A ∗ … ∗ 1_A at x, computed by direct counting
/// and through the spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionValue {
    pub direct: f64,
    pub spectral: f64,
}

pub fn convolution_power_at(a: &GroupSet, m: usize, x: usize, limits: &Limits) -> Result<ConvolutionValue> {
    if m < 2 {
        return Err(Error::domain("convolution power needs m >= 2"));
    }
    let spec = a.spec();
    limits.check_enumeration("convolution", spec.cardinality())?;
    let n = spec.cardinality() as usize;
    // counts[y] = number of j-tuples from A summing to y
    let mut counts = vec![0f64; n];
    for &y in a.indices() {
        counts[y] = 1.0;
    }
    for _ in 1..m {
        let mut next = vec![0f64; n];
        for (y, &c) in counts.iter().enumerate() {
            if c != 0.0 {
                for &b in a.indices() {
                    next[spec.add_idx(y, b)] += c;
                }
            }
        }
        counts = next;
    }
    let direct = counts[x] / (n as f64).powi(m as i32 - 1);

    let spectrum = indicator_transform(a, limits)?;
    let mut spectral = 0.0;
    for g in 0..n {
        let (re, im) = spectrum.value(g);
        // f̂^m via polar form
        let mag = re.hypot(im).powi(m as i32);
        let ang = im.atan2(re) * m as f64;
        let (c, s) = char_value(spec, g, x);
        spectral += mag * (ang.cos() * c + ang.sin() * s);
    }
    Ok(ConvolutionValue { direct, spectral })
}

/// Spec_ρ(A) = {γ : |1̂_A(γ)| ≥ ρ α}.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecThresholdSet {
    pub rho: f64,
    /// Character indices in lexicographic order.
    pub characters: Vec<usize>,
    pub includes_trivial: bool,
}

pub fn spec_threshold(spectrum: &Spectrum, rho: f64) -> Result<SpecThresholdSet> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::domain(format!("threshold {rho} outside (0, 1]")));
    }
    let alpha = spectrum.density_f64();
    // guard band: anything within EPS_NUM·α of the threshold counts as above it
    let cut = rho * alpha - EPS_NUM * alpha;
    let characters: Vec<usize> = (0..spectrum.len()).filter(|&g| spectrum.magnitude(g) >= cut).collect();
    let includes_trivial = characters.first() == Some(&0);
    Ok(SpecThresholdSet { rho, characters, includes_trivial })
}

/// Outcome of a dissociativity test; `witness` is a nontrivial ε ∈ {−1,0,1}^d
/// with Σ ε_j φ_j = 0 when one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dissociation {
    pub dissociated: bool,
    pub witness: Option<Vec<i8>>,
}

/// Exhaustive dissociativity test. A nontrivial signed relation exists iff two
/// distinct subsets share a sum, so the 3^d sign patterns are covered by
/// checking the 2^d subset sums for collisions.
pub fn is_dissociated(spec: &GroupSpec, phi: &[Character], limits: &Limits) -> Result<Dissociation> {
    for g in phi {
        spec.check_character(g)?;
    }
    let idx: Vec<usize> = phi.iter().map(|g| spec.index_of_coords(g.coords())).collect();
    is_dissociated_idx(spec, &idx, limits)
}

pub(crate) fn is_dissociated_idx(spec: &GroupSpec, phi: &[usize], limits: &Limits) -> Result<Dissociation> {
    if phi.len() > limits.dissociativity {
        return Err(Error::Resource {
            what: "dissociativity test".into(),
            needed: phi.len() as u64,
            cap: limits.dissociativity as u64,
        });
    }
    let d = phi.len();
    let mut seen: HashMap<usize, u32> = HashMap::with_capacity(1 << d);
    for mask in 0u32..(1u32 << d) {
        let s = (0..d).filter(|&j| mask >> j & 1 == 1).fold(0usize, |acc, j| spec.add_idx(acc, phi[j]));
        if let Some(&other) = seen.get(&s) {
            let witness = (0..d)
                .map(|j| (mask >> j & 1) as i8 - (other >> j & 1) as i8)
                .collect();
            return Ok(Dissociation { dissociated: false, witness: Some(witness) });
        }
        seen.insert(s, mask);
    }
    Ok(Dissociation { dissociated: true, witness: None })
}

/// Greedy maximal dissociated subset of Γ, scanning by descending coefficient
/// magnitude (ties lexicographic). Returns character indices in the order they
/// were accepted.
pub fn max_dissociated(spectrum: &Spectrum, gamma: &SpecThresholdSet, limits: &Limits) -> Result<Vec<usize>> {
    let spec = spectrum.spec();
    let mut phi: Vec<usize> = Vec::new();
    let mut sums: HashSet<usize> = HashSet::from([0]);
    for g in spectrum.ranked(&gamma.characters) {
        // φ ∪ {g} stays dissociated iff (sums + g) avoids sums
        if sums.iter().any(|&s| sums.contains(&spec.add_idx(s, g))) {
            continue;
        }
        if phi.len() == limits.dissociativity {
            return Err(Error::Resource {
                what: "greedy dissociated subset".into(),
                needed: phi.len() as u64 + 1,
                cap: limits.dissociativity as u64,
            });
        }
        let shifted: Vec<usize> = sums.iter().map(|&s| spec.add_idx(s, g)).collect();
        sums.extend(shifted);
        phi.push(g);
    }
    Ok(phi)
}

/// The cube ⟨Φ⟩ = {Σ ε_j φ_j : ε ∈ {−1,0,1}^d}.
pub fn cube_span(spec: &GroupSpec, phi: &[usize]) -> HashSet<usize> {
    let mut cube: HashSet<usize> = HashSet::from([0]);
    for &g in phi {
        let ng = spec.neg_idx(g);
        let mut next = HashSet::with_capacity(cube.len() * 3);
        for &c in &cube {
            next.insert(c);
            next.insert(spec.add_idx(c, g));
            next.insert(spec.add_idx(c, ng));
        }
        cube = next;
    }
    cube
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChangReport {
    pub size: usize,
    /// 2ρ⁻² log(1/α)
    pub bound: f64,
    pub holds: bool,
}

pub fn chang_bound_check(
    a: &GroupSet,
    spectrum: &Spectrum,
    rho: f64,
    phi: &[usize],
    base: LogBase,
    limits: &Limits,
) -> Result<ChangReport> {
    if !is_dissociated_idx(a.spec(), phi, limits)?.dissociated {
        return Err(Error::domain("Φ is not dissociated"));
    }
    let spectrum_set = spec_threshold(spectrum, rho)?;
    if let Some(g) = phi.iter().find(|g| spectrum_set.characters.binary_search(g).is_err()) {
        return Err(Error::domain(format!(
            "character {} is not in Spec_rho(A)",
            a.spec().character(*g)
        )));
    }
    let inv_alpha = BigRational::new(
        BigInt::from(a.spec().cardinality()),
        BigInt::from(a.len()),
    );
    let bound = 2.0 / (rho * rho) * base.log_rational(&inv_alpha);
    let size = phi.len();
    Ok(ChangReport { size, bound, holds: size as f64 <= bound * (1.0 + EPS_NUM) + EPS_NUM })
}

/// f(x) = Σ_j c_j Re(ω_j φ_j(x)).
#[derive(Clone, Debug, PartialEq)]
pub struct RieszFunction {
    pub characters: Vec<Character>,
    pub coefficients: Vec<f64>,
    /// Unit phases ω_j as (re, im).
    pub phases: Vec<(f64, f64)>,
}

impl RieszFunction {
    pub fn new(characters: Vec<Character>, coefficients: Vec<f64>, phases: Vec<(f64, f64)>) -> Result<Self> {
        if characters.is_empty() {
            return Err(Error::domain("a Riesz function needs at least one character"));
        }
        if coefficients.len() != characters.len() || phases.len() != characters.len() {
            return Err(Error::structural("characters, coefficients and phases must have equal length"));
        }
        if phases.iter().any(|(re, im)| (re.hypot(*im) - 1.0).abs() > EPS_NUM) {
            return Err(Error::domain("phases must have modulus 1"));
        }
        Ok(RieszFunction { characters, coefficients, phases })
    }

    pub fn eval(&self, spec: &GroupSpec, x: usize) -> f64 {
        self.characters
            .iter()
            .zip(&self.coefficients)
            .zip(&self.phases)
            .map(|((g, &c), &(wr, wi))| {
                let (cr, ci) = char_value(spec, spec.index_of_coords(g.coords()), x);
                c * (wr * cr - wi * ci)
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RieszReport {
    /// E f², by enumeration.
    pub mean_square: f64,
    /// ½ Σ c_j².
    pub half_sum_squares: f64,
    /// Exact E f² including the self-correlation of order-2 characters;
    /// equals `half_sum_squares` when no φ_j has order 2.
    pub predicted_mean_square: f64,
    pub has_order_two: bool,
    /// E e^{t f}.
    pub exp_moment: f64,
    /// e^{t² E f²}.
    pub exp_bound: f64,
    pub identity_holds: bool,
    pub bernstein_holds: bool,
}

pub fn riesz_moment_check(spec: &GroupSpec, f: &RieszFunction, t: f64, limits: &Limits) -> Result<RieszReport> {
    if !is_dissociated(spec, &f.characters, limits)?.dissociated {
        return Err(Error::domain("Riesz function characters are not dissociated"));
    }
    limits.check_enumeration("Riesz moment enumeration", spec.cardinality())?;
    let n = spec.cardinality() as usize;
    let (mut sq, mut ex) = (0.0, 0.0);
    for x in 0..n {
        let v = f.eval(spec, x);
        sq += v * v;
        ex += (t * v).exp();
    }
    let mean_square = sq / n as f64;
    let exp_moment = ex / n as f64;
    let half_sum_squares = 0.5 * f.coefficients.iter().map(|c| c * c).sum::<f64>();
    let mut predicted = half_sum_squares;
    let mut has_order_two = false;
    for ((g, &c), &(wr, wi)) in f.characters.iter().zip(&f.coefficients).zip(&f.phases) {
        if spec.char_order(g)? == 2 {
            has_order_two = true;
            // Re(ω²) = wr² − wi²
            predicted += 0.5 * c * c * (wr * wr - wi * wi);
        }
    }
    let exp_bound = (t * t * mean_square).exp();
    let scale = 1.0f64.max(predicted.abs());
    Ok(RieszReport {
        mean_square,
        half_sum_squares,
        predicted_mean_square: predicted,
        has_order_two,
        exp_moment,
        exp_bound,
        identity_holds: (mean_square - predicted).abs() <= EPS_NUM * scale,
        bernstein_holds: exp_moment <= exp_bound * (1.0 + EPS_NUM),
    })
}

/// A Bohr set description B(Γ, ρ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BohrSpec {
    pub characters: Vec<Character>,
    pub radius: Ratio<i64>,
}

impl BohrSpec {
    pub fn new(characters: Vec<Character>, radius: Ratio<i64>) -> Result<Self> {
        if radius <= Ratio::from_integer(0) {
            return Err(Error::domain("Bohr radius must be positive"));
        }
        Ok(BohrSpec { characters, radius })
    }

    pub fn dimension(&self) -> usize {
        self.characters.len()
    }
}

/// Everything the Bogolyubov–Chang step produces, with its bounds.
#[derive(Clone, Debug)]
pub struct BogolyubovReport {
    pub doubling: Ratio<i64>,
    pub density: Ratio<i64>,
    /// Spec_{1/(2√K)}(A), lexicographic.
    pub gamma_raw: Vec<usize>,
    /// Greedy maximal dissociated subset of `gamma_raw`, in acceptance order.
    pub phi: Vec<usize>,
    pub bohr: BohrSpec,
    /// Σ|1̂_A|⁴ and the lower bound α³/K.
    pub fourth_moment: f64,
    pub fourth_moment_bound: f64,
    /// 8K log(1/α) and 1/(48K log(1/α)).
    pub dimension_bound: f64,
    pub radius_bound: f64,
}

pub fn bogolyubov_bohr(a: &GroupSet, base: LogBase, limits: &Limits) -> Result<BogolyubovReport> {
    let k = doubling(a)?.k();
    let spectrum = indicator_transform(a, limits)?;
    let threshold = 0.5 / k.to_f64().unwrap().sqrt();
    let gamma = spec_threshold(&spectrum, threshold)?;
    let phi = max_dissociated(&spectrum, &gamma, limits)?;
    let d = phi.len().max(1) as i64;
    let report = BogolyubovReport::from_parts(a, &spectrum, gamma.characters, phi, Ratio::new(1, 6 * d), base)?;
    if report.fourth_moment < report.fourth_moment_bound * (1.0 - EPS_NUM) {
        return Err(Error::invariant(
            "bogolyubov",
            format!("fourth moment {} below alpha^3/K = {}", report.fourth_moment, report.fourth_moment_bound),
        ));
    }
    Ok(report)
}

impl BogolyubovReport {
    /// Rebuilds a report from recorded Γ, Φ and radius, recomputing the
    /// doubling, density and bounds from A and its spectrum.
    pub fn from_parts(
        a: &GroupSet,
        spectrum: &Spectrum,
        gamma_raw: Vec<usize>,
        phi: Vec<usize>,
        radius: Ratio<i64>,
        base: LogBase,
    ) -> Result<Self> {
        let spec = a.spec();
        let k = doubling(a)?.k();
        let kf = k.to_f64().unwrap();
        for &g in gamma_raw.iter().chain(&phi) {
            if g >= spectrum.len() {
                return Err(Error::structural(format!("character index {g} outside the dual group")));
            }
        }
        let bohr = BohrSpec::new(phi.iter().map(|&g| spec.character(g)).collect(), radius)?;
        let alpha = spectrum.density_f64();
        let log_inv_alpha = base.log_rational(&big_ratio(&spectrum.density()).recip());
        Ok(BogolyubovReport {
            doubling: k,
            density: spectrum.density(),
            gamma_raw,
            phi,
            bohr,
            fourth_moment: spectrum.fourth_moment(),
            fourth_moment_bound: alpha.powi(3) / kf,
            dimension_bound: 8.0 * kf * log_inv_alpha,
            radius_bound: if log_inv_alpha > 0.0 { 1.0 / (48.0 * kf * log_inv_alpha) } else { f64::INFINITY },
        })
    }

    /// Re-checks the containment chain B(Φ, 1/6d) ⊆ B(Γ, 1/6) ⊆ 2A − 2A, the
    /// cube-span property and the dimension bound. Membership is exact.
    pub fn verify(&self, a: &GroupSet, limits: &Limits) -> Result<Vec<Check>> {
        let spec = a.spec();
        let mut checks = Vec::new();
        let diff = iterated_sumset(a, 2, 2)?;
        let gamma_chars: Vec<Character> = self.gamma_raw.iter().map(|&g| spec.character(g)).collect();
        let raw = bohr_set(&BohrSpec::new(gamma_chars, Ratio::new(1, 6))?, spec, limits)?;
        checks.push(Check::predicate(
            "bogolyubov.raw_bohr_in_2A-2A",
            raw.is_subset(&diff),
            raw.len(),
            diff.len(),
        ));
        let small = bohr_set(&self.bohr, spec, limits)?;
        checks.push(Check::predicate(
            "bogolyubov.dissociated_bohr_in_raw_bohr",
            small.is_subset(&raw),
            small.len(),
            raw.len(),
        ));
        let cube = cube_span(spec, &self.phi);
        let outside = self.gamma_raw.iter().filter(|g| !cube.contains(g)).count();
        checks.push(Check::predicate("bogolyubov.gamma_in_cube", outside == 0, outside, 0));
        checks.push(Check::predicate(
            "bogolyubov.phi_dissociated",
            is_dissociated_idx(spec, &self.phi, limits)?.dissociated,
            self.phi.len(),
            "dissociated",
        ));
        let dim = self.phi.len() as f64;
        checks.push(Check::predicate(
            "bogolyubov.dimension_bound",
            dim <= self.dimension_bound * (1.0 + EPS_NUM) + EPS_NUM,
            self.phi.len(),
            format!("{:.12e}", self.dimension_bound),
        ));
        let radius_f = self.bohr.radius.to_f64().unwrap();
        checks.push(Check::predicate(
            "bogolyubov.radius_bound",
            self.phi.is_empty() || radius_f >= self.radius_bound * (1.0 - EPS_NUM),
            fmt_rational(&big_ratio(&self.bohr.radius)),
            format!("{:.12e}", self.radius_bound),
        ));
        Ok(checks)
    }
}
