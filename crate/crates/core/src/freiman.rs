//! Freiman homomorphisms and isomorphisms on finite sets, checked by dynamic
//! programming over sum fibers rather than by enumerating tuples.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::bohr::{CosetProgression, ProgressionGenerator};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Limits, Subgroup};
use crate::set::GroupSet;
use crate::sumset::iterated_sumset;

/// A map defined on a finite set A, stored as one image per element of A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreimanMap {
    domain: GroupSet,
    target: GroupSpec,
    images: Vec<usize>,
}

impl FreimanMap {
    pub fn new(domain: GroupSet, target: GroupSpec, pairs: &[(GroupElement, GroupElement)]) -> Result<Self> {
        let mut table: HashMap<usize, usize> = HashMap::new();
        for (x, y) in pairs {
            domain.spec().check_element(x)?;
            target.check_element(y)?;
            let xi = domain.spec().index(x);
            if !domain.contains_idx(xi) {
                return Err(Error::domain(format!("{x} is not in the domain")));
            }
            let yi = target.index(y);
            if let Some(prev) = table.insert(xi, yi) {
                if prev != yi {
                    return Err(Error::domain(format!("{x} is assigned two images")));
                }
            }
        }
        let images = domain
            .indices()
            .iter()
            .map(|x| table.get(x).copied().ok_or_else(|| Error::domain("assignment is not total on the domain")))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreimanMap { domain, target, images })
    }

    /// Builds the map from a function on element indices.
    pub fn from_fn(domain: GroupSet, target: GroupSpec, f: impl Fn(usize) -> usize) -> Self {
        let images = domain.indices().iter().map(|&x| f(x)).collect();
        FreimanMap { domain, target, images }
    }

    pub fn identity(domain: GroupSet) -> Self {
        let target = domain.spec().clone();
        FreimanMap::from_fn(domain, target, |x| x)
    }

    pub fn translation(domain: GroupSet, c: &GroupElement) -> Result<Self> {
        domain.spec().check_element(c)?;
        let spec = domain.spec().clone();
        let ci = spec.index(c);
        Ok(FreimanMap::from_fn(domain, spec.clone(), |x| spec.add_idx(x, ci)))
    }

    pub fn domain(&self) -> &GroupSet {
        &self.domain
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn pairs(&self) -> Vec<(GroupElement, GroupElement)> {
        self.domain
            .indices()
            .iter()
            .zip(&self.images)
            .map(|(&x, &y)| (self.domain.spec().element(x), self.target.element(y)))
            .collect()
    }

    pub fn image_idx(&self, x: usize) -> Option<usize> {
        self.domain.indices().binary_search(&x).ok().map(|p| self.images[p])
    }

    pub fn image(&self, x: &GroupElement) -> Option<GroupElement> {
        self.domain.spec().check_element(x).ok()?;
        self.image_idx(self.domain.spec().index(x)).map(|y| self.target.element(y))
    }

    pub fn image_set(&self) -> GroupSet {
        GroupSet::from_indices(self.target.clone(), self.images.clone())
    }

    pub fn is_injective(&self) -> bool {
        self.image_set().len() == self.images.len()
    }

    pub fn inverse(&self) -> Result<FreimanMap> {
        if !self.is_injective() {
            return Err(Error::domain("map is not injective"));
        }
        let back: HashMap<usize, usize> = self.images.iter().copied().zip(self.domain.indices().iter().copied()).collect();
        let image = self.image_set();
        Ok(FreimanMap::from_fn(image, self.domain.spec().clone(), |y| back[&y]))
    }

    /// `next ∘ self`; the image of `self` must lie in the domain of `next`.
    pub fn then(&self, next: &FreimanMap) -> Result<FreimanMap> {
        if &self.target != next.domain.spec() {
            return Err(Error::structural("composed maps do not share a group"));
        }
        let images = self
            .images
            .iter()
            .map(|&y| next.image_idx(y).ok_or_else(|| Error::domain("image leaves the next map's domain")))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreimanMap { domain: self.domain.clone(), target: next.target.clone(), images })
    }
}

/// Fibers of a signed sum: for each value of ±a_1 ± … ± a_s (signs fixed by
/// `signs`), the set of values of the same signed sum of images.
pub fn signed_fibers(map: &FreimanMap, signs: &[bool]) -> Result<BTreeMap<usize, Vec<usize>>> {
    if signs.is_empty() {
        return Err(Error::domain("fiber order must be at least 1"));
    }
    let src = map.domain.spec();
    let tgt = &map.target;
    let pairs: Vec<(usize, usize)> = map.domain.indices().iter().copied().zip(map.images.iter().copied()).collect();
    let mut layer: HashSet<(usize, usize)> = HashSet::new();
    layer.insert((0, 0));
    for &plus in signs {
        let step: Vec<(usize, usize)> = if plus {
            pairs.clone()
        } else {
            pairs.iter().map(|&(x, y)| (src.neg_idx(x), tgt.neg_idx(y))).collect()
        };
        let mut next = HashSet::with_capacity(layer.len() * 2);
        for &(s, t) in &layer {
            for &(x, y) in &step {
                next.insert((src.add_idx(s, x), tgt.add_idx(t, y)));
            }
        }
        layer = next;
    }
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (s, t) in layer {
        out.entry(s).or_default().push(t);
    }
    for v in out.values_mut() {
        v.sort_unstable();
    }
    Ok(out)
}

/// The fibers of the s-fold sum map A^s → sA.
pub fn s_fold_fibers(map: &FreimanMap, s: usize) -> Result<BTreeMap<usize, Vec<usize>>> {
    signed_fibers(map, &vec![true; s])
}

/// A sum value in the source reached with two or more distinct image sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberViolation {
    pub source_sum: GroupElement,
    pub image_sums: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomCheck {
    pub holds: bool,
    pub witness: Option<FiberViolation>,
}

fn first_violation(map: &FreimanMap, fibers: &BTreeMap<usize, Vec<usize>>) -> Option<FiberViolation> {
    fibers.iter().find(|(_, v)| v.len() > 1).map(|(&s, v)| FiberViolation {
        source_sum: map.domain.spec().element(s),
        image_sums: v.iter().map(|&t| map.target.element(t)).collect(),
    })
}

pub fn is_freiman_hom(map: &FreimanMap, s: usize) -> Result<HomCheck> {
    let fibers = s_fold_fibers(map, s)?;
    let witness = first_violation(map, &fibers);
    Ok(HomCheck { holds: witness.is_none(), witness })
}

/// Hom, injective, and the inverse is a hom of the same order.
pub fn is_freiman_iso(map: &FreimanMap, s: usize) -> Result<bool> {
    if !is_freiman_hom(map, s)?.holds {
        return Ok(false);
    }
    match map.inverse() {
        Ok(inv) => Ok(is_freiman_hom(&inv, s)?.holds),
        Err(_) => Ok(false),
    }
}

/// The map a_1+…+a_k−a_{k+1}−…−a_{2k} ↦ φ(a_1)+…−φ(a_{2k}) on kA − kA,
/// checked to be well defined and then to be a Freiman 2-isomorphism.
pub fn induced_difference_iso(map: &FreimanMap, k: usize) -> Result<FreimanMap> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let signs: Vec<bool> = (0..2 * k).map(|i| i < k).collect();
    let fibers = signed_fibers(map, &signs)?;
    if let Some(v) = first_violation(map, &fibers) {
        return Err(Error::domain(format!(
            "induced map is not well defined at {} (images {})",
            v.source_sum,
            v.image_sums.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    let domain = iterated_sumset(&map.domain, k, k)?;
    debug_assert_eq!(domain.len(), fibers.len());
    let induced = FreimanMap::from_fn(domain, map.target.clone(), |x| fibers[&x][0]);
    if !is_freiman_iso(&induced, 2)? {
        return Err(Error::domain("induced map on the difference set is not a 2-isomorphism"));
    }
    Ok(induced)
}

/// Image of a proper coset progression under a Freiman 2-isomorphism defined
/// on a set containing it. The result is verified to be proper, of the same
/// dimension and size, and to equal the image set.
pub fn transport_progression(psi: &FreimanMap, cp: &CosetProgression, limits: &Limits) -> Result<CosetProgression> {
    if cp.spec() != psi.domain.spec() {
        return Err(Error::structural("progression and map live in different groups"));
    }
    if !cp.properness_check(limits)? {
        return Err(Error::domain("progression is not proper"));
    }
    let set = cp.materialize(limits)?;
    if !set.is_subset(&psi.domain) {
        return Err(Error::domain("progression is not contained in the map's domain"));
    }
    let src = cp.spec();
    let tgt = &psi.target;
    let f = |x: usize| psi.image_idx(x).expect("checked subset");

    // anchor at the corner base + Σ lo_j v_j so that every anchor + v_j lies in P
    let corner = cp
        .generators()
        .iter()
        .fold(src.index(cp.base()), |acc, g| src.add_idx(acc, src.scale_idx(src.index(&g.element), g.lo)));
    let corner_img = f(corner);
    let mut base_img = corner_img;
    let mut generators = Vec::with_capacity(cp.dimension());
    for g in cp.generators() {
        let v = src.index(&g.element);
        let v_img = if g.hi > g.lo { tgt.sub_idx(f(src.add_idx(corner, v)), corner_img) } else { 0 };
        base_img = tgt.add_idx(base_img, tgt.scale_idx(v_img, -g.lo));
        generators.push(ProgressionGenerator { element: tgt.element(v_img), lo: g.lo, hi: g.hi });
    }
    let h_img: Vec<usize> = cp
        .subgroup()
        .element_indices()
        .iter()
        .map(|&h| tgt.sub_idx(f(src.add_idx(corner, h)), corner_img))
        .collect();
    let subgroup = Subgroup::from_elements(tgt.clone(), h_img)
        .map_err(|e| Error::domain(format!("image of the subgroup is not a subgroup: {e}")))?;
    let out = CosetProgression::new(tgt.clone(), tgt.element(base_img), generators, subgroup, limits)?;

    let image = GroupSet::from_indices(tgt.clone(), set.indices().iter().map(|&x| f(x)).collect());
    let materialized = out.materialize(limits)?;
    if materialized != image || !out.is_proper() || out.dimension() != cp.dimension() || image.len() != set.len() {
        return Err(Error::domain("transported progression does not match the image of the original"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn e(v: &[u64]) -> GroupElement {
        GroupElement::new(v.to_vec())
    }

    /// Brute-force oracle: every pair of s-tuples with equal sums has equal
    /// image sums.
    fn oracle_hom(map: &FreimanMap, s: usize) -> bool {
        let a = map.domain().indices().to_vec();
        let src = map.domain().spec();
        let tgt = map.target();
        let n = a.len();
        let mut sums: HashMap<usize, usize> = HashMap::new();
        let total = n.pow(s as u32);
        for code in 0..total {
            let (mut c, mut x, mut y) = (code, 0, 0);
            for _ in 0..s {
                let i = c % n;
                c /= n;
                x = src.add_idx(x, a[i]);
                y = tgt.add_idx(y, map.image_idx(a[i]).unwrap());
            }
            if let Some(&prev) = sums.get(&x) {
                if prev != y {
                    return false;
                }
            } else {
                sums.insert(x, y);
            }
        }
        true
    }

    fn f2_to_z4() -> FreimanMap {
        let g = GroupSpec::elementary_two(2).unwrap();
        let a = GroupSet::new(g, &[e(&[0, 0]), e(&[0, 1]), e(&[1, 0])]).unwrap();
        let z4 = GroupSpec::cyclic(4).unwrap();
        FreimanMap::new(a, z4, &[(e(&[0, 0]), e(&[0])), (e(&[1, 0]), e(&[1])), (e(&[0, 1]), e(&[2]))]).unwrap()
    }

    #[test]
    fn interval_into_smaller_cycle_is_iso() {
        let a = GroupSet::cyclic(8, &[0, 1, 2]).unwrap();
        let z5 = GroupSpec::cyclic(5).unwrap();
        let m = FreimanMap::from_fn(a, z5, |x| x);
        assert!(is_freiman_iso(&m, 2).unwrap());
        assert!(oracle_hom(&m, 2) && oracle_hom(&m.inverse().unwrap(), 2));
    }

    #[test]
    fn two_torsion_into_z4_is_not_hom() {
        let m = f2_to_z4();
        let r = is_freiman_hom(&m, 2).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        // (1,0)+(1,0) = (0,1)+(0,1) = (0,0)+(0,0) with image sums 2, 4 = 0, 0
        assert_eq!(w.source_sum, e(&[0, 0]));
        assert_eq!(w.image_sums, vec![e(&[0]), e(&[2])]);
        assert!(!oracle_hom(&m, 2));
    }

    #[test]
    fn order_one_fibers_are_singletons() {
        let m = f2_to_z4();
        let fibers = s_fold_fibers(&m, 1).unwrap();
        assert!(fibers.values().all(|v| v.len() == 1));
        assert!(s_fold_fibers(&m, 0).is_err());
    }

    #[test]
    fn translations_are_isomorphisms() {
        let a = GroupSet::cyclic(16, &[0, 3, 4, 9]).unwrap();
        let t = FreimanMap::translation(a.clone(), &e(&[5])).unwrap();
        for s in 2..5 {
            assert!(is_freiman_iso(&t, s).unwrap());
        }
        let d = induced_difference_iso(&t, 2).unwrap();
        assert!(d.pairs().iter().all(|(x, y)| x == y));
    }

    #[test]
    fn identity_induces_identity() {
        let a = GroupSet::cyclic(32, &[0, 1, 5]).unwrap();
        let d = induced_difference_iso(&FreimanMap::identity(a.clone()), 2).unwrap();
        assert_eq!(d.domain(), &iterated_sumset(&a, 2, 2).unwrap());
        assert!(d.pairs().iter().all(|(x, y)| x == y));
    }

    #[test]
    fn induced_map_rejects_non_iso() {
        // {0,1,3} in Z/5 sent to the same integers in Z/101 is not a 4-hom
        let a = GroupSet::cyclic(5, &[0, 1, 3]).unwrap();
        let z101 = GroupSpec::cyclic(101).unwrap();
        let m = FreimanMap::from_fn(a, z101, |x| x);
        assert!(matches!(induced_difference_iso(&m, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn integer_embedding_induces_two_iso() {
        // 8-fold sums of {0,1,4} stay below 41, so nothing wraps in either group
        let a = GroupSet::cyclic(101, &[0, 1, 4]).unwrap();
        let z41 = GroupSpec::cyclic(41).unwrap();
        let m = FreimanMap::from_fn(a, z41, |x| x);
        assert!(is_freiman_iso(&m, 8).unwrap());
        let d = induced_difference_iso(&m, 2).unwrap();
        assert_eq!(d.domain().len(), iterated_sumset(m.domain(), 2, 2).unwrap().len());
    }

    #[test]
    fn dp_agrees_with_oracle_on_small_maps() {
        let tgt = GroupSpec::new(vec![2, 3]).unwrap();
        for seed in 0..40u64 {
            let vals: Vec<i64> = (0..4).map(|i| ((seed * 7 + i * 3 + seed / 3) % 7) as i64).collect();
            let a = GroupSet::cyclic(7, &vals).unwrap();
            let m = FreimanMap::from_fn(a, tgt.clone(), |x| (x * (seed as usize + 1) + seed as usize) % 6);
            for s in 1..=3 {
                assert_eq!(is_freiman_hom(&m, s).unwrap().holds, oracle_hom(&m, s), "seed {seed} s {s}");
            }
        }
    }

    #[test]
    fn transport_identity_and_translation() {
        let z64 = GroupSpec::cyclic(64).unwrap();
        let cp = CosetProgression::new(
            z64.clone(),
            e(&[3]),
            vec![ProgressionGenerator { element: e(&[1]), lo: -2, hi: 2 }, ProgressionGenerator { element: e(&[10]), lo: 0, hi: 1 }],
            Subgroup::trivial(&z64),
            &lim(),
        )
        .unwrap();
        let set = cp.materialize(&lim()).unwrap();
        let id = transport_progression(&FreimanMap::identity(set.clone()), &cp, &lim()).unwrap();
        assert_eq!(id, cp);
        let t = FreimanMap::translation(set.clone(), &e(&[7])).unwrap();
        let moved = transport_progression(&t, &cp, &lim()).unwrap();
        assert_eq!(moved.base(), &e(&[10]));
        assert_eq!(moved.materialize(&lim()).unwrap(), set.translate_idx(7));
    }

    #[test]
    fn transport_across_groups_with_subgroup() {
        // P + H in Z/4 × Z/2 pulled into Z/16 × Z/2 along an injective 2-iso
        let g = GroupSpec::new(vec![8, 2]).unwrap();
        let h = Subgroup::from_elements(g.clone(), vec![0, 1]).unwrap();
        let cp = CosetProgression::new(g.clone(), e(&[0, 0]), vec![ProgressionGenerator { element: e(&[1, 0]), lo: 0, hi: 2 }], h, &lim()).unwrap();
        let set = cp.materialize(&lim()).unwrap();
        let tgt = GroupSpec::new(vec![16, 2]).unwrap();
        let psi = FreimanMap::from_fn(set, tgt.clone(), |x| {
            let c = g.coords_of(x);
            tgt.index_of_coords(&[c[0] + 5, c[1]])
        });
        let out = transport_progression(&psi, &cp, &lim()).unwrap();
        assert_eq!(out.subgroup().cardinality(), 2);
        assert_eq!(out.materialize(&lim()).unwrap().len(), 6);
        assert_eq!(out.generators()[0].element, e(&[1, 0]));
    }

    #[test]
    fn composition_and_restriction() {
        let a = GroupSet::cyclic(50, &[0, 2, 3, 7]).unwrap();
        let t1 = FreimanMap::translation(a.clone(), &e(&[4])).unwrap();
        let t2 = FreimanMap::translation(t1.image_set(), &e(&[9])).unwrap();
        let c = t1.then(&t2).unwrap();
        assert_eq!(c.image(&e(&[3])), Some(e(&[16])));
        assert!(is_freiman_iso(&c, 4).unwrap());
        assert!(t2.then(&t1).is_err());
    }
}
