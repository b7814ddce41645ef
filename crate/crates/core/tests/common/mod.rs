//! Brute-force oracles working on raw coordinate vectors. They share no code
//! with the library beyond the input types.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use freiman_core::{GroupElement, GroupSet};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};

pub type Pt = Vec<u64>;

pub fn pts(a: &GroupSet) -> Vec<Pt> {
    a.elements().into_iter().map(|e| e.coords().to_vec()).collect()
}

pub fn add(orders: &[u64], x: &[u64], y: &[u64]) -> Pt {
    x.iter().zip(y).zip(orders).map(|((a, b), n)| (a + b) % n).collect()
}

pub fn neg(orders: &[u64], x: &[u64]) -> Pt {
    x.iter().zip(orders).map(|(a, n)| (n - a) % n).collect()
}

pub fn all_points(orders: &[u64]) -> Vec<Pt> {
    let mut out = vec![vec![]];
    for &n in orders {
        out = out.into_iter().flat_map(|p: Pt| (0..n).map(move |c| [p.clone(), vec![c]].concat())).collect();
    }
    out
}

pub fn sumset(orders: &[u64], a: &BTreeSet<Pt>, b: &BTreeSet<Pt>) -> BTreeSet<Pt> {
    a.iter().flat_map(|x| b.iter().map(move |y| add(orders, x, y))).collect()
}

/// kA − lA by repeated pairwise sums.
pub fn k_minus_l(orders: &[u64], a: &[Pt], k: usize, l: usize) -> BTreeSet<Pt> {
    let aset: BTreeSet<Pt> = a.iter().cloned().collect();
    let negs: BTreeSet<Pt> = a.iter().map(|x| neg(orders, x)).collect();
    let mut cur: BTreeSet<Pt> = BTreeSet::from([vec![0; orders.len()]]);
    for _ in 0..k {
        cur = sumset(orders, &cur, &aset);
    }
    for _ in 0..l {
        cur = sumset(orders, &cur, &negs);
    }
    cur
}

pub fn lcm(orders: &[u64]) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    orders.iter().fold(1, |acc, &n| acc / gcd(acc, n) * n)
}

/// Numerator of γ(x) = e(r / e) with e the exponent of the group.
pub fn pairing(orders: &[u64], gamma: &[u64], x: &[u64]) -> u64 {
    let e = lcm(orders);
    gamma.iter().zip(x).zip(orders).map(|((g, xi), n)| g * xi % n * (e / n)).sum::<u64>() % e
}

/// |1̂_A(γ)| by the defining sum.
pub fn dft_magnitude(orders: &[u64], a: &[Pt], gamma: &[u64]) -> f64 {
    let e = lcm(orders) as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for x in a {
        let t = 2.0 * std::f64::consts::PI * pairing(orders, gamma, x) as f64 / e;
        re += t.cos();
        im += t.sin();
    }
    let n: u64 = orders.iter().product();
    re.hypot(im) / n as f64
}

/// ‖arg γ(x) / 2π‖ ≤ ρ for every γ, in exact integer arithmetic.
pub fn in_bohr(orders: &[u64], chars: &[Pt], rho: Ratio<i64>, x: &[u64]) -> bool {
    let e = lcm(orders) as i128;
    chars.iter().all(|g| {
        let r = pairing(orders, g, x) as i128;
        let dist = r.min(e - r);
        dist * *rho.denom() as i128 <= *rho.numer() as i128 * e
    })
}

pub fn bohr_set(orders: &[u64], chars: &[Pt], rho: Ratio<i64>) -> BTreeSet<Pt> {
    all_points(orders).into_iter().filter(|x| in_bohr(orders, chars, rho, x)).collect()
}

/// Every pair of s-tuples with equal sums has equal image sums.
pub fn is_hom_bruteforce(src: &[u64], tgt: &[u64], pairs: &[(Pt, Pt)], s: usize) -> bool {
    let n = pairs.len();
    let mut seen: HashMap<Pt, Pt> = HashMap::new();
    for code in 0..n.pow(s as u32) {
        let mut c = code;
        let mut x = vec![0; src.len()];
        let mut y = vec![0; tgt.len()];
        for _ in 0..s {
            let (a, b) = &pairs[c % n];
            c /= n;
            x = add(src, &x, a);
            y = add(tgt, &y, b);
        }
        match seen.get(&x) {
            Some(prev) if *prev != y => return false,
            Some(_) => {}
            None => {
                seen.insert(x, y);
            }
        }
    }
    true
}

pub fn is_iso_bruteforce(src: &[u64], tgt: &[u64], pairs: &[(Pt, Pt)], s: usize) -> bool {
    let images: BTreeSet<&Pt> = pairs.iter().map(|(_, y)| y).collect();
    if images.len() != pairs.len() {
        return false;
    }
    let inv: Vec<(Pt, Pt)> = pairs.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
    is_hom_bruteforce(src, tgt, pairs, s) && is_hom_bruteforce(tgt, src, &inv, s)
}

pub fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn el(v: &[u64]) -> GroupElement {
    GroupElement::new(v.to_vec())
}
