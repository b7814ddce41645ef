//! The end-to-end run: doubling, model, Bogolyubov–Chang, extraction,
//! transport back to A, covering. Everything the run produces goes into a
//! line-oriented certificate that `verify_certificate` re-checks from the
//! stored objects alone.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use crate::bohr::{extraction_checks, progression_from_bohr, CosetProgression, MinimaReport, ProgressionGenerator};
use crate::check::{big, big_ratio, compare_logs, fmt_ratio, fmt_rational, parse_ratio, Check, Status};
use crate::covering::{chang_cover, cover_width, verify_cover, CoverInput, CoverTrace};
use crate::error::{Error, Result};
use crate::fourier::{bogolyubov_bohr, indicator_transform, BogolyubovReport, BohrSpec, LogBase, Spectrum};
use crate::freiman::{induced_difference_iso, is_freiman_iso, transport_progression, FreimanMap};
use crate::group::{Character, GroupElement, GroupSpec, Limits};
use crate::model::{
    embed_integers, integer_model_size_status, minimize_model, model_density_status, z_model, ModelStepParams,
};
use crate::set::GroupSet;
use crate::sumset::{doubling, DoublingReport};
use crate::text::{
    parse_progression_lines, parse_set_lines, tokenize, write_integers, write_progression, write_set, Line, SetInput,
};

pub const DEFAULT_MODEL_ORDER: usize = 8;
pub const DEFAULT_MODEL_STEPS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub s: usize,
    pub skip_model: bool,
    pub delta: Ratio<i64>,
    /// Slack allowed when re-deriving the spectral threshold set.
    pub tolerance: f64,
    pub limits: Limits,
    pub max_model_steps: usize,
}

impl PipelineConfig {
    /// Order `s` with the default δ = 1/(4s).
    pub fn with_order(s: usize) -> Result<Self> {
        let params = ModelStepParams::new(s)?;
        Ok(PipelineConfig {
            s,
            skip_model: false,
            delta: params.delta,
            tolerance: crate::fourier::EPS_NUM,
            limits: Limits::default(),
            max_model_steps: DEFAULT_MODEL_STEPS,
        })
    }

    fn validate(&self) -> Result<ModelStepParams> {
        if !(self.tolerance >= 0.0 && self.tolerance < 1e-3) {
            return Err(Error::domain(format!("tolerance {} outside [0, 1e-3)", self.tolerance)));
        }
        ModelStepParams::with_delta(self.s, self.delta)
    }
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig::with_order(DEFAULT_MODEL_ORDER).expect("default order is valid")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Identity,
    /// Character shrinks; the stage lines are kept as written.
    Shrink { stages: Vec<String> },
    /// Reduction of the embedded integers modulo m.
    Integer,
}

/// The model stage: a map from the working copy of A onto A′ ⊆ G′. For
/// integer input the working copy is A − min(A) inside a cyclic group large
/// enough that no s-fold sum wraps around.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelRecord {
    pub kind: ModelKind,
    pub offset: Option<i64>,
    pub map: FreimanMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub doubling: BigRational,
    pub dimension: usize,
    pub size_ratio: BigRational,
}

#[derive(Clone, Debug)]
pub struct PipelineCertificate {
    pub config: PipelineConfig,
    pub input: SetInput,
    pub doubling: DoublingReport,
    pub model: ModelRecord,
    pub gamma_raw: Vec<Character>,
    pub phi: Vec<Character>,
    pub radius: Ratio<i64>,
    pub minima: Option<MinimaReport>,
    pub extracted: CosetProgression,
    pub transported: CosetProgression,
    pub cover: CoverTrace,
    pub checks: Vec<Check>,
    pub notes: Vec<Check>,
    pub summary: Summary,
}

/// Recomputed checks and notes. `passed` ignores notes.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub notes: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }
}

/// The set the pipeline actually works on: A itself, or the integers
/// embedded without wraparound.
pub fn working_set(input: &SetInput, s: usize) -> Result<(GroupSet, Option<i64>)> {
    match input {
        SetInput::Group(a) => Ok((a.clone(), None)),
        SetInput::Integers(v) => {
            let (a, min) = embed_integers(v, s)?;
            Ok((a, Some(min)))
        }
    }
}

fn stage_err(stage: &str, e: Error) -> Error {
    match e {
        Error::Resource { .. } | Error::Invariant { .. } => e,
        other => Error::invariant(stage, other.to_string()),
    }
}

pub fn run_pipeline(input: &SetInput, config: &PipelineConfig) -> Result<PipelineCertificate> {
    let params = config.validate()?;
    let limits = &config.limits;
    let (a, offset) = working_set(input, config.s)?;
    if a.is_empty() {
        return Err(Error::domain("the pipeline needs a nonempty set"));
    }
    limits.check_enumeration("input group", a.spec().cardinality())?;
    let rep = doubling(&a)?;

    let model = if config.skip_model {
        ModelRecord { kind: ModelKind::Identity, offset, map: FreimanMap::identity(a.clone()) }
    } else {
        match input {
            SetInput::Group(_) => {
                let trace = minimize_model(&a, &params, Ratio::from_integer(1), config.max_model_steps, limits)
                    .map_err(|e| stage_err("model", e))?;
                if trace.stages.is_empty() {
                    ModelRecord { kind: ModelKind::Identity, offset, map: FreimanMap::identity(a.clone()) }
                } else {
                    let text = crate::text::write_model_trace(&trace);
                    let stages = text.lines().filter(|l| l.starts_with("stage ")).map(str::to_string).collect();
                    ModelRecord { kind: ModelKind::Shrink { stages }, offset, map: trace.map }
                }
            }
            SetInput::Integers(v) => {
                let zm = z_model(v, config.s, limits).map_err(|e| stage_err("model", e))?;
                ModelRecord { kind: ModelKind::Integer, offset, map: zm.map }
            }
        }
    };

    let model_set = model.map.image_set();
    let model_spec = model_set.spec().clone();
    let bog = bogolyubov_bohr(&model_set, LogBase::Natural, limits).map_err(|e| stage_err("bogolyubov", e))?;
    let extraction =
        progression_from_bohr(&bog.bohr, &model_spec, limits).map_err(|e| stage_err("extraction", e))?;
    let transported = transport_back(&model.map, &extraction.progression, limits).map_err(|e| stage_err("transport", e))?;
    let cover_input = CoverInput::new(a.clone(), transported.clone(), limits).map_err(|e| stage_err("covering", e))?;
    let cover = chang_cover(&cover_input, limits).map_err(|e| stage_err("covering", e))?;

    let mut cert = PipelineCertificate {
        config: config.clone(),
        input: input.clone(),
        doubling: rep,
        model,
        gamma_raw: bog.gamma_raw.iter().map(|&g| model_spec.character(g)).collect(),
        phi: bog.phi.iter().map(|&g| model_spec.character(g)).collect(),
        radius: bog.bohr.radius,
        minima: extraction.minima,
        extracted: extraction.progression,
        transported,
        cover,
        checks: Vec::new(),
        notes: Vec::new(),
        summary: Summary { doubling: BigRational::zero(), dimension: 0, size_ratio: BigRational::zero() },
    };
    cert.summary = summarize(&cert, &a);
    let report = evaluate(&cert)?;
    if let Some(bad) = report.failures().first() {
        return Err(Error::invariant("certificate", bad.to_string()));
    }
    cert.checks = report.checks;
    cert.notes = report.notes;
    Ok(cert)
}

/// ψ = the 2-isomorphism on 2A′ − 2A′ induced by π⁻¹, applied to P + H.
fn transport_back(pi: &FreimanMap, cp: &CosetProgression, limits: &Limits) -> Result<CosetProgression> {
    let inv = pi.inverse()?;
    let psi = induced_difference_iso(&inv, 2)?;
    transport_progression(&psi, cp, limits)
}

fn summarize(cert: &PipelineCertificate, a: &GroupSet) -> Summary {
    Summary {
        doubling: cert.doubling.k_big(),
        dimension: cert.cover.q.dimension(),
        size_ratio: BigRational::new(BigInt::from(cert.cover.q_set.len()), BigInt::from(a.len())),
    }
}

/// Turns a failed computation into a failing check instead of aborting.
fn attempt<T>(checks: &mut Vec<Check>, name: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            checks.push(Check::predicate(name, false, "error", e.to_string().replace(' ', "_")));
            None
        }
    }
}

pub fn verify_certificate(cert: &PipelineCertificate) -> Result<VerificationReport> {
    let mut report = evaluate(cert)?;
    let recorded = cert.checks == report.checks && cert.notes == report.notes;
    report.checks.push(Check::predicate(
        "certificate.checks_recorded",
        recorded,
        cert.checks.len() + cert.notes.len(),
        report.checks.len() + report.notes.len(),
    ));
    Ok(report)
}

/// Parses and verifies certificate text.
pub fn verify_certificate_text(text: &str) -> Result<VerificationReport> {
    let cert = parse_certificate(text)?;
    verify_certificate(&cert)
}

/// Every check the certificate claims, recomputed from its stored objects.
fn evaluate(cert: &PipelineCertificate) -> Result<VerificationReport> {
    let cfg = &cert.config;
    let limits = &cfg.limits;
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    let (a, offset) = working_set(&cert.input, cfg.s)?;
    limits.check_enumeration("input group", a.spec().cardinality())?;
    let rep = doubling(&a)?;
    checks.push(Check::predicate(
        "doubling.recorded",
        rep == cert.doubling,
        format!("{}/{}", cert.doubling.sumset_size, cert.doubling.set_size),
        format!("{}/{}", rep.sumset_size, rep.set_size),
    ));

    // model
    let map = &cert.model.map;
    checks.push(Check::predicate("model.domain", map.domain() == &a && cert.model.offset == offset, map.domain().len(), a.len()));
    let order = match cert.model.kind {
        ModelKind::Identity => 1,
        _ => cfg.s,
    };
    let iso = map.domain() == &a && is_freiman_iso(map, order)?;
    checks.push(Check::predicate("model.iso", iso, order, "DP"));
    let model_set = map.image_set();
    let gp = model_set.spec().clone();
    limits.check_enumeration("model group", gp.cardinality())?;
    match cert.model.kind {
        ModelKind::Shrink { .. } => {
            notes.push(Check::new("model.density_bound", model_density_status(&a, &gp, cfg.s)?, gp.cardinality(), a.len()))
        }
        ModelKind::Integer => {
            notes.push(Check::new("model.size_bound", integer_model_size_status(&a, gp.cardinality())?, gp.cardinality(), a.len()))
        }
        ModelKind::Identity => {}
    }

    // spectral step
    let spectrum = indicator_transform(&model_set, limits)?;
    let gamma_idx = character_indices(&gp, &cert.gamma_raw)?;
    let phi_idx = character_indices(&gp, &cert.phi)?;
    checks.push(threshold_check(&spectrum, &rep, &gamma_idx, cfg.tolerance));
    checks.push(Check::predicate(
        "bogolyubov.phi_in_gamma",
        phi_idx.iter().all(|g| gamma_idx.contains(g)),
        phi_idx.len(),
        gamma_idx.len(),
    ));
    let radius_rule = Ratio::new(1, 6 * cert.phi.len().max(1) as i64);
    checks.push(Check::predicate("bogolyubov.radius_rule", cert.radius == radius_rule, fmt_ratio(&cert.radius), fmt_ratio(&radius_rule)));
    let bog = BogolyubovReport::from_parts(&model_set, &spectrum, gamma_idx, phi_idx, cert.radius, LogBase::Natural)?;
    checks.extend(bog.verify(&model_set, limits)?);
    let kf = rep.k_big().to_f64().unwrap_or(f64::INFINITY);
    notes.push(Check::new(
        "bogolyubov.headline_dimension",
        compare_logs(cert.phi.len() as f64, 512.0 * kf.powi(3) * (kf + 2.0).ln()),
        cert.phi.len(),
        format!("{:.6e}", 512.0 * kf.powi(3) * (kf + 2.0).ln()),
    ));

    // extraction
    let kept: Vec<Character> = cert.phi.iter().filter(|g| !g.is_trivial()).cloned().collect();
    let d = kept.len();
    checks.push(Check::predicate(
        "bohr.minima_present",
        cert.minima.is_some() == (d > 0) && cert.minima.as_ref().is_none_or(|m| m.characters == kept),
        cert.minima.as_ref().map_or(0, |m| m.dimension()),
        d,
    ));
    let kernel = gp.kernel_of_characters(&kept, limits)?;
    if let Some(m) = &cert.minima {
        checks.push(Check::predicate(
            "bohr.kernel_size",
            m.kernel_size == kernel.cardinality() as u64 && m.group_size == gp.cardinality(),
            m.kernel_size,
            kernel.cardinality(),
        ));
        checks.push(minkowski_attained(m));
    }
    checks.push(ranges_check(cert, &kernel, d));
    let small = BohrSpec { characters: kept, radius: cert.radius };
    let ext_ok = cert.extracted.spec() == &gp;
    checks.push(Check::predicate("bohr.progression_group", ext_ok, "model", "group"));
    if ext_ok {
        if let Some(cs) = attempt(&mut checks, "bohr.progression_checks", extraction_checks(&cert.extracted, &small, d, cert.minima.as_ref(), limits)) {
            checks.extend(cs);
        }
    }
    let size_lb = crate::bohr::extraction_size_bound(&cert.radius, d, gp.cardinality());
    notes.push(Check::new(
        "bohr.size_ratio",
        Status::Pass,
        fmt_rational(&(big(cert.extracted.formal_size() * kernel_cardinality(&cert.extracted)) / big(gp.cardinality()))),
        fmt_rational(&(size_lb / big(gp.cardinality()))),
    ));

    // transport
    let transported = attempt(&mut checks, "transport.recompute", transport_back(map, &cert.extracted, limits));
    checks.push(Check::predicate(
        "transport.matches",
        transported.as_ref() == Some(&cert.transported),
        cert.transported.dimension(),
        transported.as_ref().map_or(0, |t| t.dimension()),
    ));
    if let Some(t) = &transported {
        let src = cert.extracted.materialize(limits)?.len();
        let dst = t.materialize(limits)?.len();
        checks.push(Check::predicate(
            "transport.size",
            src == dst && t.dimension() == cert.extracted.dimension() && t.properness_check(limits)?,
            dst,
            src,
        ));
    }

    // covering
    let cover_in = if cert.transported.spec() == a.spec() {
        attempt(&mut checks, "cover.input", CoverInput::new(a.clone(), cert.transported.clone(), limits))
    } else {
        checks.push(Check::predicate("cover.input", false, "group", "mismatch"));
        None
    };
    if let Some(input) = &cover_in {
        if let Some((cs, ns)) = attempt(&mut checks, "cover.verify", verify_cover(input, &cert.cover, limits)) {
            checks.extend(cs);
            notes.extend(ns);
        }
    }
    let expect = summarize(cert, &a);
    checks.push(Check::predicate(
        "summary.recorded",
        expect == cert.summary,
        format!("{}:{}", cert.summary.dimension, fmt_rational(&cert.summary.size_ratio)),
        format!("{}:{}", expect.dimension, fmt_rational(&expect.size_ratio)),
    ));
    if let Some(input) = &cover_in {
        let m_k = cover_width(&input.k);
        checks.push(Check::le(
            "summary.dimension",
            &big(expect.dimension as u64),
            &big((input.dimension + 2 * m_k * (cert.cover.t + 1)) as u64),
        ));
    }
    Ok(VerificationReport { checks, notes })
}

fn kernel_cardinality(cp: &CosetProgression) -> BigInt {
    BigInt::from(cp.subgroup().cardinality())
}

fn character_indices(spec: &GroupSpec, chars: &[Character]) -> Result<Vec<usize>> {
    chars
        .iter()
        .map(|g| {
            spec.check_character(g)?;
            Ok(spec.index_of_coords(g.coords()))
        })
        .collect()
}

/// Γ is exactly the set of characters with |1̂_A(γ)| ≥ α/(2√K), up to the
/// configured tolerance on either side of the threshold.
fn threshold_check(spectrum: &Spectrum, rep: &DoublingReport, gamma: &[usize], tol: f64) -> Check {
    let alpha = spectrum.density_f64();
    let cut = 0.5 / rep.k().to_f64().unwrap().sqrt() * alpha;
    let band = tol * alpha;
    let mut bad = 0usize;
    for g in 0..spectrum.len() {
        let m = spectrum.magnitude(g);
        let listed = gamma.binary_search(&g).is_ok();
        if (listed && m < cut - band) || (!listed && m >= cut + band) {
            bad += 1;
        }
    }
    let sorted = gamma.windows(2).all(|w| w[0] < w[1]);
    Check::predicate("bogolyubov.spectrum_threshold", bad == 0 && sorted, bad, 0)
}

/// λ_j is exactly the max-norm of the recorded vector b_j.
fn minkowski_attained(m: &MinimaReport) -> Check {
    let ok = m.minima.len() == m.vectors.len()
        && m.denominator > 0
        && m.minima.iter().zip(&m.vectors).all(|(l, b)| {
            let norm = b.iter().map(|x| x.abs()).max().unwrap_or(0);
            *l == Ratio::new(norm, m.denominator)
        });
    Check::predicate("bohr.minkowski_attained", ok, crate::bohr::fmt_minima(m).replace(' ', ","), "norms")
}

/// The extracted progression is Σ [−L_j, L_j]·v_j + ker with L_j = ⌊ρ/(dλ_j)⌋.
fn ranges_check(cert: &PipelineCertificate, kernel: &crate::group::Subgroup, d: usize) -> Check {
    let cp = &cert.extracted;
    let expected: Vec<ProgressionGenerator> = match &cert.minima {
        None => Vec::new(),
        Some(m) => m
            .minima
            .iter()
            .zip(&m.preimages)
            .map(|(l, v)| {
                let l = if l.is_zero() {
                    i64::MAX
                } else {
                    (big_ratio(&cert.radius) / (big(d as u64) * big_ratio(l))).floor().to_integer().to_i64().unwrap_or(i64::MAX)
                };
                ProgressionGenerator { element: v.clone(), lo: -l, hi: l }
            })
            .collect(),
    };
    let ok = cp.generators() == expected.as_slice()
        && cp.subgroup() == kernel
        && cp.base().coords().iter().all(|&c| c == 0);
    Check::predicate("bohr.ranges_from_minima", ok, cp.dimension(), expected.len())
}

// ---------------------------------------------------------------------------
// text form

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_certificate(cert: &PipelineCertificate) -> String {
    let cfg = &cert.config;
    let mut out = String::from("certificate freiman 1\n");
    writeln!(
        out,
        "config s {} skip_model {} delta {} tolerance {:e} cap {} dissociativity {} steps {}",
        cfg.s,
        u8::from(cfg.skip_model),
        fmt_ratio(&cfg.delta),
        cfg.tolerance,
        cfg.limits.enumeration,
        cfg.limits.dissociativity,
        cfg.max_model_steps
    )
    .unwrap();

    out.push_str("section input\n");
    match &cert.input {
        SetInput::Group(a) => out.push_str(&write_set(a)),
        SetInput::Integers(v) => out.push_str(&write_integers(v)),
    }
    out.push_str("end\n");

    writeln!(out, "section doubling\nsizes {} {}\nend", cert.doubling.set_size, cert.doubling.sumset_size).unwrap();

    let m = &cert.model;
    out.push_str("section model\n");
    match &m.kind {
        ModelKind::Identity => out.push_str("kind identity\n"),
        ModelKind::Integer => out.push_str("kind integer\n"),
        ModelKind::Shrink { stages } => {
            out.push_str("kind shrink\n");
            for s in stages {
                writeln!(out, "{s}").unwrap();
            }
        }
    }
    if let Some(o) = m.offset {
        writeln!(out, "offset {o}").unwrap();
    }
    writeln!(out, "source {}", join(m.map.domain().spec().orders())).unwrap();
    writeln!(out, "target {}", join(m.map.target().orders())).unwrap();
    for (x, y) in m.map.pairs() {
        writeln!(out, "pair {x} -> {y}").unwrap();
    }
    out.push_str("end\n");

    out.push_str("section bohr\n");
    writeln!(out, "radius {}", fmt_ratio(&cert.radius)).unwrap();
    for g in &cert.gamma_raw {
        writeln!(out, "gamma {g}").unwrap();
    }
    for g in &cert.phi {
        writeln!(out, "phi {g}").unwrap();
    }
    out.push_str("end\n");

    if let Some(mr) = &cert.minima {
        out.push_str("section minima\n");
        writeln!(
            out,
            "lattice denominator {} kernel {} group {} stripped {}",
            mr.denominator, mr.kernel_size, mr.group_size, mr.stripped_trivial
        )
        .unwrap();
        for g in &mr.characters {
            writeln!(out, "character {g}").unwrap();
        }
        for ((l, b), v) in mr.minima.iter().zip(&mr.vectors).zip(&mr.preimages) {
            writeln!(out, "minimum {} vector {} preimage {v}", fmt_ratio(l), join(b)).unwrap();
        }
        out.push_str("end\n");
    }

    writeln!(out, "section extracted\n{}end", write_progression(&cert.extracted)).unwrap();
    writeln!(out, "section transported\n{}end", write_progression(&cert.transported)).unwrap();

    let c = &cert.cover;
    out.push_str("section cover\n");
    writeln!(out, "steps t {} m_k {}", c.t, c.m_k).unwrap();
    for (i, r) in c.r_sets.iter().enumerate() {
        writeln!(out, "rset {i} {}", r.len()).unwrap();
        for x in r.elements() {
            writeln!(out, "elem {x}").unwrap();
        }
    }
    for (i, s) in c.s_sets.iter().enumerate() {
        writeln!(out, "sset {i} {}", s.len()).unwrap();
        for x in s.elements() {
            writeln!(out, "elem {x}").unwrap();
        }
    }
    out.push_str("end\n");

    writeln!(out, "section final\n{}end", write_progression(&c.q)).unwrap();

    out.push_str("section checks\n");
    for ch in &cert.checks {
        writeln!(out, "{ch}").unwrap();
    }
    for n in &cert.notes {
        writeln!(out, "note {} {} {} {}", n.name, n.status, n.lhs, n.rhs).unwrap();
    }
    writeln!(out, "summary doubling {}", fmt_rational(&cert.summary.doubling)).unwrap();
    writeln!(out, "summary dimension {}", cert.summary.dimension).unwrap();
    writeln!(out, "summary size_ratio {}", fmt_rational(&cert.summary.size_ratio)).unwrap();
    out.push_str("end\n");
    out
}

struct Sections<'a> {
    list: Vec<(&'a Line, &'a [Line])>,
}

impl<'a> Sections<'a> {
    fn split(lines: &'a [Line]) -> Result<Self> {
        let mut list = Vec::new();
        let mut i = 0;
        while i < lines.len() {
            let head = &lines[i];
            if head.keyword() != "section" || head.args().len() != 1 {
                return Err(head.err(format!("expected `section <name>`, got {:?}", head.keyword())));
            }
            let end = lines[i + 1..]
                .iter()
                .position(|l| l.keyword() == "end")
                .ok_or_else(|| head.err("section is not closed by `end`"))?;
            list.push((head, &lines[i + 1..i + 1 + end]));
            i += end + 2;
        }
        Ok(Sections { list })
    }

    fn get(&self, name: &str) -> Option<(&'a Line, &'a [Line])> {
        self.list.iter().find(|(h, _)| h.args()[0] == name).copied()
    }

    fn need(&self, name: &str) -> Result<(&'a Line, &'a [Line])> {
        self.get(name).ok_or_else(|| Error::parse(0, format!("certificate has no `{name}` section")))
    }
}

/// Reads `key value key value ...` pairs after the keyword.
fn keyed<'l>(line: &'l Line, keys: &[&str]) -> Result<Vec<&'l str>> {
    let args = line.args();
    if args.len() != 2 * keys.len() {
        return Err(line.err(format!("expected fields {}", keys.join(" "))));
    }
    keys.iter()
        .enumerate()
        .map(|(i, k)| {
            if args[2 * i] != *k {
                return Err(line.err(format!("expected `{k}`, got {:?}", args[2 * i])));
            }
            Ok(args[2 * i + 1].as_str())
        })
        .collect()
}

fn num<T: std::str::FromStr>(line: &Line, w: &str) -> Result<T> {
    w.parse::<T>().map_err(|_| line.err(format!("bad number {w:?}")))
}

fn ratio(line: &Line, w: &str) -> Result<Ratio<i64>> {
    parse_ratio(w).map_err(|e| line.err(e))
}

fn rational(line: &Line, w: &str) -> Result<BigRational> {
    crate::check::parse_rational(w).map_err(|e| line.err(e))
}

fn parse_group_line(line: &Line) -> Result<GroupSpec> {
    GroupSpec::new(line.u64s(line.args())?).map_err(|e| line.err(e.to_string()))
}

fn element(line: &Line, spec: &GroupSpec, words: &[String]) -> Result<GroupElement> {
    let x = GroupElement::new(line.u64s(words)?);
    spec.check_element(&x).map_err(|e| line.err(e.to_string()))?;
    Ok(x)
}

fn character(line: &Line, spec: &GroupSpec, words: &[String]) -> Result<Character> {
    let g = Character::new(line.u64s(words)?);
    spec.check_character(&g).map_err(|e| line.err(e.to_string()))?;
    Ok(g)
}

pub fn parse_certificate(text: &str) -> Result<PipelineCertificate> {
    let lines = tokenize(text);
    let head = lines.first().ok_or_else(|| Error::parse(1, "empty certificate"))?;
    if head.words != ["certificate", "freiman", "1"] {
        return Err(head.err("not a certificate (expected `certificate freiman 1`)"));
    }
    let cl = lines.get(1).ok_or_else(|| head.err("missing config line"))?;
    if cl.keyword() != "config" {
        return Err(cl.err("expected `config`"));
    }
    let f = keyed(cl, &["s", "skip_model", "delta", "tolerance", "cap", "dissociativity", "steps"])?;
    let config = PipelineConfig {
        s: num(cl, f[0])?,
        skip_model: match f[1] {
            "0" => false,
            "1" => true,
            w => return Err(cl.err(format!("skip_model must be 0 or 1, got {w:?}"))),
        },
        delta: ratio(cl, f[2])?,
        tolerance: num(cl, f[3])?,
        limits: Limits { enumeration: num(cl, f[4])?, dissociativity: num(cl, f[5])? },
        max_model_steps: num(cl, f[6])?,
    };
    config.validate().map_err(|e| cl.err(e.to_string()))?;
    let limits = &config.limits;
    let sections = Sections::split(&lines[2..])?;

    let (_, body) = sections.need("input")?;
    let input = parse_set_lines(body)?;

    let (h, body) = sections.need("doubling")?;
    let l = body.first().ok_or_else(|| h.err("empty doubling section"))?;
    if l.keyword() != "sizes" {
        return Err(l.err("expected `sizes`"));
    }
    l.expect_args(2)?;
    let doubling = DoublingReport { set_size: num(l, &l.args()[0])?, sumset_size: num(l, &l.args()[1])? };

    let model = parse_model(sections.need("model")?)?;
    let gp = model.map.target().clone();

    let (h, body) = sections.need("bohr")?;
    let mut radius = None;
    let mut gamma_raw = Vec::new();
    let mut phi = Vec::new();
    for l in body {
        match l.keyword() {
            "radius" => {
                l.expect_args(1)?;
                radius = Some(ratio(l, &l.args()[0])?);
            }
            "gamma" => gamma_raw.push(character(l, &gp, l.args())?),
            "phi" => phi.push(character(l, &gp, l.args())?),
            other => return Err(l.err(format!("unexpected {other:?} in bohr section"))),
        }
    }
    let radius = radius.ok_or_else(|| h.err("bohr section has no radius"))?;

    let minima = sections.get("minima").map(|s| parse_minima(s, &gp)).transpose()?;

    let extracted = parse_progression_lines(sections.need("extracted")?.1, limits)?;
    let transported = parse_progression_lines(sections.need("transported")?.1, limits)?;
    let q = parse_progression_lines(sections.need("final")?.1, limits)?;
    let cover = parse_cover(sections.need("cover")?, q, limits)?;

    let (h, body) = sections.need("checks")?;
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let mut summary = Summary { doubling: BigRational::zero(), dimension: 0, size_ratio: BigRational::zero() };
    let mut seen = 0;
    for l in body {
        match l.keyword() {
            "check" | "note" => {
                l.expect_args(4)?;
                let a = l.args();
                let status: Status = a[1].parse().map_err(|e: String| l.err(e))?;
                let c = Check::new(&a[0], status, &a[2], &a[3]);
                if l.keyword() == "check" { checks.push(c) } else { notes.push(c) }
            }
            "summary" => {
                l.expect_args(2)?;
                let v = &l.args()[1];
                match l.args()[0].as_str() {
                    "doubling" => summary.doubling = rational(l, v)?,
                    "dimension" => summary.dimension = num(l, v)?,
                    "size_ratio" => summary.size_ratio = rational(l, v)?,
                    other => return Err(l.err(format!("unknown summary field {other:?}"))),
                }
                seen += 1;
            }
            other => return Err(l.err(format!("unexpected {other:?} in checks section"))),
        }
    }
    if seen != 3 {
        return Err(h.err("checks section needs doubling, dimension and size_ratio summaries"));
    }

    Ok(PipelineCertificate {
        config,
        input,
        doubling,
        model,
        gamma_raw,
        phi,
        radius,
        minima,
        extracted,
        transported,
        cover,
        checks,
        notes,
        summary,
    })
}

fn parse_model((h, body): (&Line, &[Line])) -> Result<ModelRecord> {
    let mut kind = None;
    let mut stages = Vec::new();
    let mut offset = None;
    let mut source = None;
    let mut target = None;
    let mut pairs = Vec::new();
    for l in body {
        match l.keyword() {
            "kind" => {
                l.expect_args(1)?;
                kind = Some(l.args()[0].clone());
            }
            "stage" => stages.push(l.words.join(" ")),
            "offset" => {
                l.expect_args(1)?;
                offset = Some(num::<i64>(l, &l.args()[0])?);
            }
            "source" => source = Some(parse_group_line(l)?),
            "target" => target = Some(parse_group_line(l)?),
            "pair" => {
                let (Some(s), Some(t)) = (&source, &target) else {
                    return Err(l.err("`source` and `target` must precede pairs"));
                };
                let arrow = l.args().iter().position(|w| w == "->").ok_or_else(|| l.err("pair needs `->`"))?;
                pairs.push((element(l, s, &l.args()[..arrow])?, element(l, t, &l.args()[arrow + 1..])?));
            }
            other => return Err(l.err(format!("unexpected {other:?} in model section"))),
        }
    }
    let kind = match kind.as_deref() {
        Some("identity") => ModelKind::Identity,
        Some("integer") => ModelKind::Integer,
        Some("shrink") => ModelKind::Shrink { stages },
        Some(other) => return Err(h.err(format!("unknown model kind {other:?}"))),
        None => return Err(h.err("model section has no kind")),
    };
    let source = source.ok_or_else(|| h.err("model section has no source group"))?;
    let target = target.ok_or_else(|| h.err("model section has no target group"))?;
    let domain = GroupSet::new(source, &pairs.iter().map(|(x, _)| x.clone()).collect::<Vec<_>>())?;
    let map = FreimanMap::new(domain, target, &pairs).map_err(|e| h.err(e.to_string()))?;
    Ok(ModelRecord { kind, offset, map })
}

fn parse_minima((h, body): (&Line, &[Line]), gp: &GroupSpec) -> Result<MinimaReport> {
    let first = body.first().ok_or_else(|| h.err("empty minima section"))?;
    if first.keyword() != "lattice" {
        return Err(first.err("expected `lattice`"));
    }
    let f = keyed(first, &["denominator", "kernel", "group", "stripped"])?;
    let mut report = MinimaReport {
        characters: Vec::new(),
        stripped_trivial: num(first, f[3])?,
        denominator: num(first, f[0])?,
        minima: Vec::new(),
        vectors: Vec::new(),
        preimages: Vec::new(),
        kernel_size: num(first, f[1])?,
        group_size: num(first, f[2])?,
    };
    for l in &body[1..] {
        match l.keyword() {
            "character" => report.characters.push(character(l, gp, l.args())?),
            "minimum" => {
                let a = l.args();
                let vi = a.iter().position(|w| w == "vector").ok_or_else(|| l.err("minimum needs `vector`"))?;
                let pi = a.iter().position(|w| w == "preimage").ok_or_else(|| l.err("minimum needs `preimage`"))?;
                if vi != 1 || pi < vi {
                    return Err(l.err("expected `minimum λ vector b.. preimage v..`"));
                }
                report.minima.push(ratio(l, &a[0])?);
                report.vectors.push(l.i64s(&a[vi + 1..pi])?);
                report.preimages.push(element(l, gp, &a[pi + 1..])?);
            }
            other => return Err(l.err(format!("unexpected {other:?} in minima section"))),
        }
    }
    Ok(report)
}

fn parse_cover((h, body): (&Line, &[Line]), q: CosetProgression, limits: &Limits) -> Result<CoverTrace> {
    let first = body.first().ok_or_else(|| h.err("empty cover section"))?;
    if first.keyword() != "steps" {
        return Err(first.err("expected `steps`"));
    }
    let f = keyed(first, &["t", "m_k"])?;
    let (t, m_k): (usize, usize) = (num(first, f[0])?, num(first, f[1])?);
    let spec = q.spec().clone();
    let mut r_sets: Vec<Vec<GroupElement>> = Vec::new();
    let mut s_sets: Vec<Vec<GroupElement>> = Vec::new();
    let mut current: Option<&mut Vec<GroupElement>> = None;
    let mut expected = 0usize;
    let mut pending: Vec<(&Line, usize)> = Vec::new();
    for l in &body[1..] {
        match l.keyword() {
            "rset" | "sset" => {
                l.expect_args(2)?;
                let i: usize = num(l, &l.args()[0])?;
                expected = num(l, &l.args()[1])?;
                let list = if l.keyword() == "rset" { &mut r_sets } else { &mut s_sets };
                if i != list.len() {
                    return Err(l.err(format!("sets must be numbered in order, expected {}", list.len())));
                }
                list.push(Vec::new());
                pending.push((l, expected));
                current = list.last_mut();
            }
            "elem" => {
                let x = element(l, &spec, l.args())?;
                current.as_mut().ok_or_else(|| l.err("`elem` outside a set"))?.push(x);
            }
            other => return Err(l.err(format!("unexpected {other:?} in cover section"))),
        }
    }
    let _ = expected;
    let all = r_sets.iter().chain(&s_sets);
    for ((l, n), set) in pending.iter().zip(all) {
        if set.len() != *n {
            return Err(l.err(format!("set announces {n} elements but lists {}", set.len())));
        }
    }
    let build = |v: Vec<Vec<GroupElement>>| -> Result<Vec<GroupSet>> {
        v.into_iter().map(|e| GroupSet::new(spec.clone(), &e)).collect()
    };
    let q_set = q.materialize(limits)?;
    Ok(CoverTrace {
        t,
        m_k,
        r_sets: build(r_sets)?,
        s_sets: build(s_sets)?,
        q,
        q_set,
        checks: Vec::new(),
        notes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_random_of_size;

    fn group_input(n: u64, elems: &[i64]) -> SetInput {
        SetInput::Group(GroupSet::cyclic(n, elems).unwrap())
    }

    #[test]
    fn subgroup_gives_doubling_one_and_small_dimension() {
        let cert = run_pipeline(&group_input(12, &[0, 3, 6, 9]), &PipelineConfig::default()).unwrap();
        assert_eq!(cert.summary.doubling, big(1));
        assert!(cert.summary.dimension <= 1);
        let SetInput::Group(a) = &cert.input else { unreachable!() };
        assert!(a.is_subset(&cert.cover.q_set));
        assert!(verify_certificate(&cert).unwrap().passed());
    }

    #[test]
    fn text_round_trip_is_byte_identical() {
        let a = gen_random_of_size(&[64], 32, 7, &Limits::default()).unwrap();
        let cfg = PipelineConfig::default();
        let cert = run_pipeline(&SetInput::Group(a.clone()), &cfg).unwrap();
        let text = write_certificate(&cert);
        let again = write_certificate(&run_pipeline(&SetInput::Group(a), &cfg).unwrap());
        assert_eq!(text, again);
        let parsed = parse_certificate(&text).unwrap();
        assert_eq!(write_certificate(&parsed), text);
        let rep = verify_certificate(&parsed).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
    }

    #[test]
    fn integer_input_uses_reduction_model() {
        let cert = run_pipeline(&SetInput::Integers((0..10).collect()), &PipelineConfig::default()).unwrap();
        assert_eq!(cert.model.kind, ModelKind::Integer);
        assert_eq!(cert.model.offset, Some(0));
        let text = write_certificate(&cert);
        assert!(verify_certificate_text(&text).unwrap().passed());
    }

    #[test]
    fn interval_in_large_cyclic_group() {
        let cert = run_pipeline(&group_input(1000, &(0..10).collect::<Vec<_>>()), &PipelineConfig::default()).unwrap();
        let rep = verify_certificate(&cert).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert!(cert.model.map.target().cardinality() < 1000);
    }

    #[test]
    fn skip_model_keeps_identity() {
        let cfg = PipelineConfig { skip_model: true, ..PipelineConfig::default() };
        let cert = run_pipeline(&group_input(1000, &(0..10).collect::<Vec<_>>()), &cfg).unwrap();
        assert_eq!(cert.model.kind, ModelKind::Identity);
        assert!(verify_certificate(&cert).unwrap().passed());
    }

    #[test]
    fn tampered_minimum_names_minkowski() {
        let cert = run_pipeline(&group_input(64, &[0, 1, 2, 3, 4, 5, 9, 20]), &PipelineConfig::default()).unwrap();
        let mut bad = cert.clone();
        let m = bad.minima.as_mut().expect("nontrivial Bohr set");
        m.minima[0] *= Ratio::new(3, 2);
        let rep = verify_certificate(&bad).unwrap();
        assert!(!rep.passed());
        assert!(rep.failures().iter().any(|c| c.name.contains("minkowski")));
    }

    #[test]
    fn dropping_a_generator_from_the_final_progression_breaks_containment() {
        let cert = run_pipeline(&group_input(1000, &[0, 1, 100, 300]), &PipelineConfig::default()).unwrap();
        let text = write_certificate(&cert);
        let start = text.find("section final").unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let first = text[..start].lines().count();
        let mut named = 0;
        for i in first..lines.len() {
            if lines[i] == "end" {
                break;
            }
            if !lines[i].starts_with("gen ") {
                continue;
            }
            let mut cut = lines.clone();
            cut.remove(i);
            let rep = verify_certificate_text(&(cut.join("\n") + "\n")).unwrap();
            assert!(!rep.passed());
            if rep.failures().iter().any(|c| c.name == "cover.contains_A") {
                named += 1;
            }
        }
        assert!(named > 0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(parse_certificate("certificate freiman 2\n"), Err(Error::Parse { line: 1, .. })));
        let cert = run_pipeline(&group_input(12, &[0, 3, 6, 9]), &PipelineConfig::default()).unwrap();
        let text = write_certificate(&cert).replace("section bohr", "section bohr\nbogus 1");
        assert!(matches!(parse_certificate(&text), Err(Error::Parse { .. })));
    }

    #[test]
    fn config_validation() {
        let cfg = PipelineConfig { delta: Ratio::new(1, 2), ..PipelineConfig::default() };
        assert!(run_pipeline(&group_input(8, &[0]), &cfg).is_err());
        let cfg = PipelineConfig { tolerance: f64::NAN, ..PipelineConfig::default() };
        assert!(run_pipeline(&group_input(8, &[0]), &cfg).is_err());
        assert!(run_pipeline(&group_input(8, &[]), &PipelineConfig::default()).is_err());
    }
}
