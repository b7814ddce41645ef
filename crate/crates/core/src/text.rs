//! Line-oriented text formats for sets, progressions, maps, spectra and
//! traces. Blank lines and `#` comments are ignored everywhere.

use std::fmt::Write as _;

use crate::bohr::{CosetProgression, ProgressionGenerator};
use crate::check::fmt_ratio;
use crate::covering::CoverTrace;
use crate::error::{Error, Result};
use crate::fourier::Spectrum;
use crate::freiman::FreimanMap;
use crate::group::{GroupElement, GroupSpec, Limits};
use crate::model::{ModelTrace, StageKind};
use crate::set::GroupSet;

/// A non-empty, non-comment line split into words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub no: usize,
    pub words: Vec<String>,
}

impl Line {
    pub fn keyword(&self) -> &str {
        &self.words[0]
    }

    pub fn args(&self) -> &[String] {
        &self.words[1..]
    }

    pub fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.no, msg)
    }

    pub fn u64s(&self, words: &[String]) -> Result<Vec<u64>> {
        words.iter().map(|w| w.parse::<u64>().map_err(|_| self.err(format!("expected a nonnegative integer, got {w:?}")))).collect()
    }

    pub fn i64s(&self, words: &[String]) -> Result<Vec<i64>> {
        words.iter().map(|w| w.parse::<i64>().map_err(|_| self.err(format!("expected an integer, got {w:?}")))).collect()
    }

    pub fn expect_args(&self, n: usize) -> Result<()> {
        if self.args().len() != n {
            return Err(self.err(format!("{} expects {n} values, got {}", self.keyword(), self.args().len())));
        }
        Ok(())
    }
}

pub fn tokenize(text: &str) -> Vec<Line> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let words: Vec<String> = body.split_whitespace().map(str::to_string).collect();
            (!words.is_empty()).then_some(Line { no: i + 1, words })
        })
        .collect()
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_group(line: &Line) -> Result<GroupSpec> {
    let orders = line.u64s(line.args())?;
    GroupSpec::new(orders).map_err(|e| line.err(e.to_string()))
}

fn parse_element(line: &Line, spec: &GroupSpec, words: &[String]) -> Result<GroupElement> {
    let x = GroupElement::new(line.u64s(words)?);
    spec.check_element(&x).map_err(|e| line.err(e.to_string()))?;
    Ok(x)
}

/// A set file holds either a subset of a finite group or a set of integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetInput {
    Group(GroupSet),
    Integers(Vec<i64>),
}

pub fn write_set(a: &GroupSet) -> String {
    let mut out = format!("group {}\n", join(a.spec().orders()));
    for x in a.elements() {
        writeln!(out, "elem {x}").unwrap();
    }
    out
}

pub fn write_integers(values: &[i64]) -> String {
    let mut out = String::from("integers\n");
    for v in values {
        writeln!(out, "elem {v}").unwrap();
    }
    out
}

pub fn parse_set(text: &str) -> Result<SetInput> {
    parse_set_lines(&tokenize(text))
}

pub fn parse_set_lines(lines: &[Line]) -> Result<SetInput> {
    let Some(head) = lines.first() else {
        return Err(Error::parse(1, "empty set file"));
    };
    match head.keyword() {
        "group" => {
            let spec = parse_group(head)?;
            let mut elems = Vec::new();
            for l in &lines[1..] {
                if l.keyword() != "elem" {
                    return Err(l.err(format!("unexpected {:?} in set file", l.keyword())));
                }
                elems.push(parse_element(l, &spec, l.args())?);
            }
            Ok(SetInput::Group(GroupSet::new(spec, &elems)?))
        }
        "integers" => {
            head.expect_args(0)?;
            let mut values = Vec::new();
            for l in &lines[1..] {
                if l.keyword() != "elem" {
                    return Err(l.err(format!("unexpected {:?} in integer set file", l.keyword())));
                }
                l.expect_args(1)?;
                values.extend(l.i64s(l.args())?);
            }
            values.sort_unstable();
            values.dedup();
            Ok(SetInput::Integers(values))
        }
        other => Err(head.err(format!("set file must start with `group` or `integers`, got {other:?}"))),
    }
}

pub fn parse_group_set(text: &str) -> Result<GroupSet> {
    match parse_set(text)? {
        SetInput::Group(a) => Ok(a),
        SetInput::Integers(_) => Err(Error::parse(1, "expected a subset of a finite group, found integers")),
    }
}

pub fn write_progression(cp: &CosetProgression) -> String {
    let mut out = String::from("progression\n");
    writeln!(out, "group {}", join(cp.spec().orders())).unwrap();
    writeln!(out, "base {}", cp.base()).unwrap();
    for g in cp.generators() {
        writeln!(out, "gen {} {} {}", g.element, g.lo, g.hi).unwrap();
    }
    writeln!(out, "subgroup").unwrap();
    for h in cp.subgroup().generators() {
        writeln!(out, "sgen {h}").unwrap();
    }
    writeln!(out, "proper {}", u8::from(cp.is_proper())).unwrap();
    out
}

pub fn parse_progression(text: &str, limits: &Limits) -> Result<CosetProgression> {
    parse_progression_lines(&tokenize(text), limits)
}

/// Parses a progression block. The recorded properness flag is kept as
/// written; callers that need it confirmed use `properness_check`.
pub fn parse_progression_lines(lines: &[Line], limits: &Limits) -> Result<CosetProgression> {
    let mut it = lines.iter();
    let head = it.next().ok_or_else(|| Error::parse(1, "empty progression"))?;
    if head.keyword() != "progression" {
        return Err(head.err("progression must start with `progression`"));
    }
    let mut spec: Option<GroupSpec> = None;
    let mut base = None;
    let mut gens = Vec::new();
    let mut sgens = Vec::new();
    let mut proper = None;
    for l in it {
        let need_spec = || spec.clone().ok_or_else(|| l.err("`group` must come first"));
        match l.keyword() {
            "group" => spec = Some(parse_group(l)?),
            "base" => base = Some(parse_element(l, &need_spec()?, l.args())?),
            "gen" => {
                let s = need_spec()?;
                if l.args().len() != s.rank() + 2 {
                    return Err(l.err(format!("gen expects {} coordinates and two bounds", s.rank())));
                }
                let (coords, bounds) = l.args().split_at(s.rank());
                let element = parse_element(l, &s, coords)?;
                let b = l.i64s(bounds)?;
                gens.push(ProgressionGenerator { element, lo: b[0], hi: b[1] });
            }
            "subgroup" => {}
            "sgen" => sgens.push(parse_element(l, &need_spec()?, l.args())?),
            "proper" => {
                l.expect_args(1)?;
                proper = Some(match l.args()[0].as_str() {
                    "0" => false,
                    "1" => true,
                    w => return Err(l.err(format!("proper must be 0 or 1, got {w:?}"))),
                });
            }
            other => return Err(l.err(format!("unexpected {other:?} in progression"))),
        }
    }
    let spec = spec.ok_or_else(|| head.err("progression has no `group` line"))?;
    let base = base.unwrap_or_else(|| spec.zero());
    let subgroup = spec.subgroup_closure(&sgens, limits)?;
    match proper {
        Some(p) => CosetProgression::from_parts(spec, base, gens, subgroup, p),
        None => CosetProgression::new(spec, base, gens, subgroup, limits),
    }
}

pub fn write_map(map: &FreimanMap) -> String {
    let mut out = String::from("map\n");
    writeln!(out, "source {}", join(map.domain().spec().orders())).unwrap();
    writeln!(out, "target {}", join(map.target().orders())).unwrap();
    for (x, y) in map.pairs() {
        writeln!(out, "pair {x} -> {y}").unwrap();
    }
    out
}

pub fn parse_map(text: &str) -> Result<FreimanMap> {
    parse_map_lines(&tokenize(text))
}

pub fn parse_map_lines(lines: &[Line]) -> Result<FreimanMap> {
    let mut it = lines.iter();
    let head = it.next().ok_or_else(|| Error::parse(1, "empty map"))?;
    if head.keyword() != "map" {
        return Err(head.err("map must start with `map`"));
    }
    let mut source = None;
    let mut target = None;
    let mut pairs = Vec::new();
    for l in it {
        match l.keyword() {
            "source" => source = Some(parse_group(l)?),
            "target" => target = Some(parse_group(l)?),
            "pair" => {
                let (Some(s), Some(t)) = (&source, &target) else {
                    return Err(l.err("`source` and `target` must precede pairs"));
                };
                let arrow = l.args().iter().position(|w| w == "->").ok_or_else(|| l.err("pair needs `->`"))?;
                let x = parse_element(l, s, &l.args()[..arrow])?;
                let y = parse_element(l, t, &l.args()[arrow + 1..])?;
                pairs.push((x, y));
            }
            other => return Err(l.err(format!("unexpected {other:?} in map"))),
        }
    }
    let source = source.ok_or_else(|| head.err("map has no `source` line"))?;
    let target = target.ok_or_else(|| head.err("map has no `target` line"))?;
    let domain = GroupSet::new(source, &pairs.iter().map(|(x, _)| x.clone()).collect::<Vec<_>>())?;
    FreimanMap::new(domain, target, &pairs)
}

/// One line per character: coordinates, real part, imaginary part, modulus.
pub fn write_spectrum(s: &Spectrum) -> String {
    let spec = s.spec();
    let mut out = format!("group {}\n", join(spec.orders()));
    for g in 0..s.len() {
        let (re, im) = s.value(g);
        writeln!(out, "char {} {:.11e} {:.11e} {:.11e}", spec.character(g), re, im, s.magnitude(g)).unwrap();
    }
    out
}

pub fn write_model_trace(t: &ModelTrace) -> String {
    let mut out = format!("model s {} stages {}\n", t.s, t.stages.len());
    for (i, st) in t.stages.iter().enumerate() {
        match &st.kind {
            StageKind::Character { gamma, q, interval, difference_arc, coefficient } => writeln!(
                out,
                "stage {i} group {} gamma {gamma} q {q} interval {} {} diffarc {} {} coef {:.11e} to {}",
                join(st.from.orders()),
                interval.start,
                interval.length,
                difference_arc.start,
                difference_arc.length,
                coefficient,
                join(st.to.orders())
            ),
            StageKind::Quotient { x, coordinate } => writeln!(
                out,
                "stage {i} group {} quotient {x} coordinate {coordinate} to {}",
                join(st.from.orders()),
                join(st.to.orders())
            ),
        }
        .unwrap();
    }
    writeln!(out, "verified {}", u8::from(t.verified)).unwrap();
    writeln!(out, "density {} bound {}", fmt_ratio(&t.model.density()), t.density_bound).unwrap();
    out.push_str(&write_set(&t.model));
    out
}

pub fn write_cover_trace(t: &CoverTrace) -> String {
    let mut out = format!("cover t {} m_k {}\n", t.t, t.m_k);
    for (i, r) in t.r_sets.iter().enumerate() {
        for x in r.elements() {
            writeln!(out, "r {i} {x}").unwrap();
        }
    }
    for (i, s) in t.s_sets.iter().enumerate() {
        for x in s.elements() {
            writeln!(out, "s {i} {x}").unwrap();
        }
    }
    for c in t.checks.iter() {
        writeln!(out, "{c}").unwrap();
    }
    for c in t.notes.iter() {
        writeln!(out, "note {} {} {} {}", c.name, c.status, c.lhs, c.rhs).unwrap();
    }
    writeln!(out, "size {}", t.q_set.len()).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Subgroup;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn set_round_trip() {
        let text = "# a comment\ngroup 8 3\n\nelem 7 2\nelem 1 1 # trailing\nelem 7 2\n";
        let a = parse_group_set(text).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(parse_group_set(&write_set(&a)).unwrap(), a);
    }

    #[test]
    fn integer_sets() {
        assert_eq!(parse_set("integers\nelem 5\nelem -2\nelem 5\n").unwrap(), SetInput::Integers(vec![-2, 5]));
        assert_eq!(parse_set(&write_integers(&[0, 1, 2])).unwrap(), SetInput::Integers(vec![0, 1, 2]));
    }

    #[test]
    fn set_parse_errors_name_the_line() {
        assert!(matches!(parse_set("group 8\nelem 9\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_set("elem 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_set("group 8\nfoo 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_set(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn progression_round_trip() {
        let g = GroupSpec::new(vec![8, 2]).unwrap();
        let h = Subgroup::from_elements(g.clone(), vec![0, 1]).unwrap();
        let cp = CosetProgression::new(
            g.clone(),
            GroupElement::new(vec![3, 0]),
            vec![ProgressionGenerator { element: GroupElement::new(vec![1, 0]), lo: -1, hi: 1 }],
            h,
            &lim(),
        )
        .unwrap();
        let text = write_progression(&cp);
        assert!(text.contains("gen 1 0 -1 1"));
        assert_eq!(parse_progression(&text, &lim()).unwrap(), cp);
    }

    #[test]
    fn map_round_trip() {
        let a = GroupSet::cyclic(8, &[0, 1, 2]).unwrap();
        let m = FreimanMap::from_fn(a, GroupSpec::cyclic(5).unwrap(), |x| x);
        let text = write_map(&m);
        assert!(text.contains("pair 2 -> 2"));
        assert_eq!(parse_map(&text).unwrap(), m);
        assert!(parse_map("map\nsource 8\ntarget 5\npair 1 2\n").is_err());
    }

    #[test]
    fn spectrum_lines() {
        let a = GroupSet::cyclic(4, &[0]).unwrap();
        let s = crate::fourier::indicator_transform(&a, &lim()).unwrap();
        let text = write_spectrum(&s);
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().nth(1).unwrap().starts_with("char 0 2.50000000000e-1 0.00000000000e0"));
    }
}
