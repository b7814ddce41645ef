//! Named bound checks and the rational helpers they are evaluated with.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};


#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

impl std::str::FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pass" => Ok(Status::Pass),
            "fail" => Ok(Status::Fail),
            "inconclusive" => Ok(Status::Inconclusive),
            other => Err(format!("unknown check status {other:?}")),
        }
    }
}

/// One evaluated inequality (or predicate) with both sides rendered as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
}

impl Check {
    pub fn new(name: &str, status: Status, lhs: impl ToString, rhs: impl ToString) -> Self {
        Check { name: name.to_string(), status, lhs: lhs.to_string(), rhs: rhs.to_string() }
    }

    /// `lhs <= rhs`, exactly.
    pub fn le(name: &str, lhs: &BigRational, rhs: &BigRational) -> Self {
        let status = if lhs <= rhs { Status::Pass } else { Status::Fail };
        Check::new(name, status, fmt_rational(lhs), fmt_rational(rhs))
    }

    pub fn predicate(name: &str, ok: bool, lhs: impl ToString, rhs: impl ToString) -> Self {
        Check::new(name, if ok { Status::Pass } else { Status::Fail }, lhs, rhs)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check {} {} {} {}", self.name, self.status, self.lhs, self.rhs)
    }
}

pub fn big(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn big_ratio(r: &Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_ratio(r: &Ratio<i64>) -> String {
    fmt_rational(&big_ratio(r))
}

pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|e| format!("bad integer {t:?}: {e}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err("zero denominator".to_string());
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

pub fn parse_ratio(s: &str) -> std::result::Result<Ratio<i64>, String> {
    let r = parse_rational(s)?;
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Ratio::new(n, d)),
        _ => Err(format!("rational {s:?} does not fit in 64 bits")),
    }
}

/// Natural log of a positive rational, robust for huge numerators/denominators.
pub fn ln_rational(r: &BigRational) -> f64 {
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        n.to_f64().unwrap_or(f64::INFINITY).abs().ln()
    } else {
        let shift = bits - 64;
        let top: BigInt = n.abs() >> shift;
        top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

pub fn floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// Compares `lhs <= rhs` where both sides are only known in floating point,
/// with a relative margin covering accumulated rounding. Values inside the
/// margin are reported as inconclusive.
pub fn compare_logs(lhs: f64, rhs: f64) -> Status {
    let margin = 1e-9 * (1.0 + lhs.abs().max(rhs.abs()));
    if lhs + margin <= rhs {
        Status::Pass
    } else if lhs > rhs + margin {
        Status::Fail
    } else {
        Status::Inconclusive
    }
}
