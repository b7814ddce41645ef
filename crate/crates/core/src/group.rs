//! Finite abelian groups presented as products of cyclic groups.
//!
//! Elements are coordinate vectors, but most of the crate works with their
//! mixed-radix index instead: the last coordinate varies fastest, so index
//! order coincides with lexicographic coordinate order.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Exact rational type used for character arguments.
pub type Frac = num_rational::Ratio<i64>;

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;
pub const DEFAULT_DISSOCIATIVITY_CAP: usize = 16;

/// Hard ceiling on group cardinality so indices always fit in a machine word.
const MAX_CARDINALITY: u64 = 1 << 62;

/// Resource caps for exhaustive computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub enumeration: u64,
    pub dissociativity: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { enumeration: DEFAULT_ENUMERATION_CAP, dissociativity: DEFAULT_DISSOCIATIVITY_CAP }
    }
}

impl Limits {
    pub fn check_enumeration(&self, what: &str, needed: u64) -> Result<()> {
        if needed > self.enumeration {
            return Err(Error::Resource { what: what.to_string(), needed, cap: self.enumeration });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement(coords)
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.0)
    }
}

/// A character of the group, identified with a coordinate vector of the
/// (isomorphic) dual group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(Vec<u64>);

impl Character {
    pub fn new(coords: Vec<u64>) -> Self {
        Character(coords)
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.0)
    }
}

fn write_coords(f: &mut fmt::Formatter<'_>, coords: &[u64]) -> fmt::Result {
    for (i, c) in coords.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

/// The group Z/n_1 x ... x Z/n_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    orders: Vec<u64>,
    strides: Vec<u64>,
    cardinality: u64,
    exponent: u64,
}

impl GroupSpec {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::structural("a group needs at least one cyclic factor"));
        }
        if let Some(bad) = orders.iter().find(|&&n| n == 0) {
            return Err(Error::structural(format!("cyclic factor order {bad} must be >= 1")));
        }
        let mut strides = vec![0u64; orders.len()];
        let mut acc: u64 = 1;
        for i in (0..orders.len()).rev() {
            strides[i] = acc;
            acc = acc
                .checked_mul(orders[i])
                .filter(|&c| c <= MAX_CARDINALITY)
                .ok_or_else(|| Error::structural("group cardinality exceeds 2^62"))?;
        }
        let exponent = orders.iter().fold(1u64, |l, &n| l.lcm(&n));
        Ok(GroupSpec { orders, strides, cardinality: acc, exponent })
    }

    /// Z/n.
    pub fn cyclic(n: u64) -> Result<Self> {
        GroupSpec::new(vec![n])
    }

    /// F_2^m.
    pub fn elementary_two(m: usize) -> Result<Self> {
        GroupSpec::new(vec![2; m.max(1)])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_elementary_two(&self) -> bool {
        self.orders.iter().all(|&n| n == 2)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn check_element(&self, x: &GroupElement) -> Result<()> {
        self.check_coords(&x.0, "element")
    }

    pub fn check_character(&self, g: &Character) -> Result<()> {
        self.check_coords(&g.0, "character")
    }

    fn check_coords(&self, coords: &[u64], what: &str) -> Result<()> {
        if coords.len() != self.rank() {
            return Err(Error::structural(format!(
                "{what} has {} coordinates, group has {} factors",
                coords.len(),
                self.rank()
            )));
        }
        for (c, n) in coords.iter().zip(&self.orders) {
            if c >= n {
                return Err(Error::structural(format!("{what} coordinate {c} out of range for Z/{n}")));
            }
        }
        Ok(())
    }

    /// Builds an element from arbitrary signed coordinates, reducing each one.
    pub fn element_from_signed(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::structural("coordinate count does not match group rank"));
        }
        Ok(GroupElement(
            coords.iter().zip(&self.orders).map(|(&c, &n)| c.rem_euclid(n as i64) as u64).collect(),
        ))
    }

    pub fn index(&self, x: &GroupElement) -> usize {
        self.index_of_coords(&x.0)
    }

    pub fn index_of_coords(&self, coords: &[u64]) -> usize {
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum::<u64>() as usize
    }

    pub fn element(&self, idx: usize) -> GroupElement {
        GroupElement(self.coords_of(idx))
    }

    pub fn character(&self, idx: usize) -> Character {
        Character(self.coords_of(idx))
    }

    pub fn coords_of(&self, idx: usize) -> Vec<u64> {
        let idx = idx as u64;
        self.orders.iter().zip(&self.strides).map(|(&n, &s)| (idx / s) % n).collect()
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let (a, b) = (a as u64, b as u64);
        let mut out = 0u64;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let x = (a / s) % n;
            let y = (b / s) % n;
            let z = if x + y >= n { x + y - n } else { x + y };
            out += z * s;
        }
        out as usize
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        let a = a as u64;
        let mut out = 0u64;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let x = (a / s) % n;
            out += ((n - x) % n) * s;
        }
        out as usize
    }

    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// m·a for a signed integer m.
    pub fn scale_idx(&self, a: usize, m: i64) -> usize {
        let a = a as u64;
        let mut out = 0u64;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let x = ((a / s) % n) as i128;
            let z = (x * m as i128).rem_euclid(n as i128) as u64;
            out += z * s;
        }
        out as usize
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(GroupElement(
            a.0.iter().zip(&b.0).zip(&self.orders).map(|((x, y), n)| (x + y) % n).collect(),
        ))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_element(a)?;
        Ok(GroupElement(a.0.iter().zip(&self.orders).map(|(x, n)| (n - x) % n).collect()))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b)?)
    }

    /// Order of the element with index `a`.
    pub fn element_order_idx(&self, a: usize) -> u64 {
        self.coords_of(a)
            .iter()
            .zip(&self.orders)
            .fold(1u64, |l, (&x, &n)| l.lcm(&(n / x.gcd(&n))))
    }

    /// All elements in lexicographic order.
    pub fn enumerate(&self, limits: &Limits) -> Result<Vec<GroupElement>> {
        limits.check_enumeration("group enumeration", self.cardinality)?;
        Ok((0..self.cardinality as usize).map(|i| self.element(i)).collect())
    }

    /// Numerator of the character argument over the group exponent, i.e. the
    /// integer `r` with arg(γ(x))/2π ≡ r / exponent (mod 1).
    pub fn arg_numerator_idx(&self, gamma: usize, x: usize) -> u64 {
        let (g, x) = (gamma as u64, x as u64);
        let e = self.exponent as u128;
        let mut acc: u128 = 0;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let c = ((g / s) % n) as u128;
            let y = ((x / s) % n) as u128;
            // c*y/n == c*y*(e/n)/e
            acc = (acc + (c * y % n as u128) * (e / n as u128)) % e;
        }
        acc as u64
    }

    /// arg(γ(x))/2π as an exact rational in [0, 1).
    pub fn char_arg_fraction(&self, gamma: &Character, x: &GroupElement) -> Result<Frac> {
        self.check_character(gamma)?;
        self.check_element(x)?;
        let num = self.arg_numerator_idx(self.index_of_coords(&gamma.0), self.index(x));
        Ok(Frac::new(num as i64, self.exponent as i64))
    }

    /// Least q >= 1 with q·γ trivial.
    pub fn char_order(&self, gamma: &Character) -> Result<u64> {
        self.check_character(gamma)?;
        Ok(gamma.0.iter().zip(&self.orders).fold(1u64, |l, (&c, &n)| l.lcm(&(n / c.gcd(&n)))))
    }

    pub fn char_order_idx(&self, gamma: usize) -> u64 {
        self.element_order_idx(gamma)
    }

    /// The homomorphism ψ: G → Z/q with arg(γ(x))/2π = ψ(x)/q, q = ord(γ).
    pub fn hom_from_character(&self, gamma: &Character) -> Result<Homomorphism> {
        let q = self.char_order(gamma)?;
        if q == 1 {
            return Err(Error::domain("trivial character has no associated homomorphism"));
        }
        let target = GroupSpec::cyclic(q)?;
        let matrix = gamma
            .0
            .iter()
            .zip(&self.orders)
            .map(|(&c, &n)| vec![((c as u128 * q as u128 / n as u128) % q as u128) as u64])
            .collect();
        Homomorphism::new(self.clone(), target, matrix)
    }

    /// Closure of the given generators under addition.
    pub fn subgroup_closure(&self, generators: &[GroupElement], limits: &Limits) -> Result<Subgroup> {
        for g in generators {
            self.check_element(g)?;
        }
        let gens: Vec<usize> = generators.iter().map(|g| self.index(g)).collect();
        let elements = closure_indices(self, &gens, limits)?;
        Ok(Subgroup { ambient: self.clone(), generators: generators.to_vec(), elements })
    }

    /// The joint kernel of a family of characters.
    pub fn kernel_of_characters(&self, gammas: &[Character], limits: &Limits) -> Result<Subgroup> {
        for g in gammas {
            self.check_character(g)?;
        }
        limits.check_enumeration("kernel enumeration", self.cardinality)?;
        let gidx: Vec<usize> = gammas.iter().map(|g| self.index_of_coords(&g.0)).collect();
        let elements: Vec<usize> = (0..self.cardinality as usize)
            .filter(|&x| gidx.iter().all(|&g| self.arg_numerator_idx(g, x) == 0))
            .collect();
        Subgroup::from_elements(self.clone(), elements)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.orders)
    }
}

fn closure_indices(spec: &GroupSpec, gens: &[usize], limits: &Limits) -> Result<Vec<usize>> {
    let mut seen: HashSet<usize> = HashSet::from([0]);
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = spec.add_idx(x, g);
            if seen.insert(y) {
                limits.check_enumeration("subgroup closure", seen.len() as u64)?;
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<usize> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// A group homomorphism between two product-of-cyclic groups, given by the
/// images of the standard generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    source: GroupSpec,
    target: GroupSpec,
    matrix: Vec<Vec<u64>>,
}

impl Homomorphism {
    pub fn new(source: GroupSpec, target: GroupSpec, matrix: Vec<Vec<u64>>) -> Result<Self> {
        if matrix.len() != source.rank() || matrix.iter().any(|row| row.len() != target.rank()) {
            return Err(Error::structural("homomorphism matrix has the wrong shape"));
        }
        let matrix: Vec<Vec<u64>> = matrix
            .into_iter()
            .map(|row| row.iter().zip(target.orders()).map(|(v, m)| v % m).collect())
            .collect();
        for (i, row) in matrix.iter().enumerate() {
            let n = source.orders()[i] as u128;
            for (j, &v) in row.iter().enumerate() {
                if !(n * v as u128).is_multiple_of(target.orders()[j] as u128) {
                    return Err(Error::domain(format!(
                        "generator {i} has order {n} but its image does not respect that relation"
                    )));
                }
            }
        }
        Ok(Homomorphism { source, target, matrix })
    }

    pub fn source(&self) -> &GroupSpec {
        &self.source
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.source.check_element(x)?;
        let out = (0..self.target.rank())
            .map(|j| {
                let m = self.target.orders()[j] as u128;
                let s: u128 = x
                    .coords()
                    .iter()
                    .zip(&self.matrix)
                    .map(|(&xi, row)| (xi as u128 * row[j] as u128) % m)
                    .sum();
                (s % m) as u64
            })
            .collect();
        Ok(GroupElement(out))
    }

    pub fn apply_idx(&self, x: usize) -> usize {
        let coords = self.source.coords_of(x);
        let img = self.apply(&GroupElement(coords)).expect("index in range");
        self.target.index(&img)
    }
}

/// A subgroup with its element list materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    ambient: GroupSpec,
    generators: Vec<GroupElement>,
    elements: Vec<usize>,
}

impl Subgroup {
    /// The trivial subgroup {0}.
    pub fn trivial(ambient: &GroupSpec) -> Self {
        Subgroup { ambient: ambient.clone(), generators: Vec::new(), elements: vec![0] }
    }

    /// Wraps an element list already known to be a subgroup; closure is
    /// re-checked and a small generating set is extracted.
    pub fn from_elements(ambient: GroupSpec, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let set: HashSet<usize> = elements.iter().copied().collect();
        if !set.contains(&0) {
            return Err(Error::domain("subgroup must contain the identity"));
        }
        // greedy generating set in lexicographic order
        let mut gens: Vec<usize> = Vec::new();
        let mut span: HashSet<usize> = HashSet::from([0]);
        for &x in &elements {
            if span.contains(&x) {
                continue;
            }
            gens.push(x);
            let mut frontier: Vec<usize> = span.iter().copied().collect();
            while let Some(y) = frontier.pop() {
                for &g in &gens {
                    let z = ambient.add_idx(y, g);
                    if span.insert(z) {
                        frontier.push(z);
                    }
                }
            }
            if span.len() > elements.len() {
                return Err(Error::domain("element list is not closed under addition"));
            }
        }
        if span.len() != elements.len() || !span.iter().all(|x| set.contains(x)) {
            return Err(Error::domain("element list is not closed under addition"));
        }
        let generators = gens.iter().map(|&g| ambient.element(g)).collect();
        Ok(Subgroup { ambient, generators, elements })
    }

    pub fn ambient(&self) -> &GroupSpec {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Sorted element indices.
    pub fn element_indices(&self) -> &[usize] {
        &self.elements
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.elements.iter().map(|&i| self.ambient.element(i)).collect()
    }

    pub fn cardinality(&self) -> usize {
        self.elements.len()
    }

    pub fn contains_idx(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.ambient.check_element(x).is_ok() && self.contains_idx(self.ambient.index(x))
    }

    /// Splits the subgroup as an internal direct sum of cyclic subgroups.
    pub fn cyclic_decomposition(&self) -> Result<CyclicDecomposition> {
        CyclicDecomposition::of(self)
    }
}

/// An isomorphism Z/m_1 x ... x Z/m_r → H, given by a basis of H.
#[derive(Clone, Debug)]
pub struct CyclicDecomposition {
    basis: Vec<usize>,
    orders: Vec<u64>,
    coords: std::collections::HashMap<usize, Vec<u64>>,
}

impl CyclicDecomposition {
    fn of(h: &Subgroup) -> Result<Self> {
        let spec = &h.ambient;
        let mut span: HashSet<usize> = HashSet::from([0]);
        let mut basis = Vec::new();
        let mut orders = Vec::new();
        while span.len() < h.elements.len() {
            // An element whose coset has maximal order in H/span and whose own
            // order matches generates a direct summand.
            let mut best: Option<(u64, usize)> = None;
            let mut best_coset_order = 0u64;
            for &x in &h.elements {
                if span.contains(&x) {
                    continue;
                }
                let ord = spec.element_order_idx(x);
                let coset_order = divisors(ord)
                    .into_iter()
                    .find(|&m| span.contains(&spec.scale_idx(x, m as i64)))
                    .unwrap_or(ord);
                if coset_order > best_coset_order {
                    best_coset_order = coset_order;
                    best = None;
                }
                if coset_order == best_coset_order && ord == coset_order && best.is_none() {
                    best = Some((ord, x));
                }
            }
            let (ord, x) = best.ok_or_else(|| {
                Error::invariant("cyclic decomposition", "no order-preserving lift of a maximal coset")
            })?;
            let old: Vec<usize> = span.iter().copied().collect();
            for j in 1..ord {
                let jx = spec.scale_idx(x, j as i64);
                for &s in &old {
                    span.insert(spec.add_idx(s, jx));
                }
            }
            basis.push(x);
            orders.push(ord);
        }
        let mut coords = std::collections::HashMap::with_capacity(h.elements.len());
        let total: u64 = orders.iter().product();
        for flat in 0..total {
            let mut rem = flat;
            let mut c = vec![0u64; orders.len()];
            let mut y = 0usize;
            for (i, &m) in orders.iter().enumerate().rev() {
                c[i] = rem % m;
                rem /= m;
                y = spec.add_idx(y, spec.scale_idx(basis[i], c[i] as i64));
            }
            if coords.insert(y, c).is_some() {
                return Err(Error::invariant("cyclic decomposition", "basis is not independent"));
            }
        }
        if coords.len() != h.elements.len() {
            return Err(Error::invariant("cyclic decomposition", "basis does not span the subgroup"));
        }
        Ok(CyclicDecomposition { basis, orders, coords })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Coordinates of a subgroup element in the basis.
    pub fn coords_of(&self, x: usize) -> Option<&[u64]> {
        self.coords.get(&x).map(|v| v.as_slice())
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
