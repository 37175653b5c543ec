//! Down-sets in preorders and nullity structures on finite carriers.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, FiniteSet, SetMap};

/// Largest carrier a [`Family`] can describe.
pub const MAX_CARRIER: usize = 6;

/// A set of subsets of `{0, …, n-1}`: bit `m` is set when subset `m` belongs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family {
    n: u8,
    bits: u64,
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{{")?;
            let elems: Vec<String> = (0..self.n).filter(|&e| m >> e & 1 == 1).map(|e| e.to_string()).collect();
            write!(f, "{}}}", elems.join(""))?;
        }
        f.write_str("}")
    }
}

impl Family {
    fn check_size(n: usize) {
        assert!(n <= MAX_CARRIER, "carrier of size {n} exceeds {MAX_CARRIER}");
    }

    pub fn empty(n: usize) -> Self {
        Self::check_size(n);
        Family { n: n as u8, bits: 0 }
    }

    /// `{∅}`.
    pub fn trivial(n: usize) -> Self {
        Self::empty(n).with(0)
    }

    /// Every subset.
    pub fn full(n: usize) -> Self {
        Self::check_size(n);
        let count = 1u32 << n;
        let bits = if count == 64 { u64::MAX } else { (1u64 << count) - 1 };
        Family { n: n as u8, bits }
    }

    pub fn from_members(n: usize, members: impl IntoIterator<Item = u32>) -> Self {
        members.into_iter().fold(Self::empty(n), |f, m| f.with(m))
    }

    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self::full(n).intersect_bits(bits)
    }

    fn intersect_bits(self, bits: u64) -> Self {
        Family { n: self.n, bits: self.bits & bits }
    }

    pub fn carrier_size(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn with(mut self, subset: u32) -> Self {
        assert!(subset < 1 << self.n, "subset outside carrier");
        self.bits |= 1 << subset;
        self
    }

    pub fn contains(&self, subset: u32) -> bool {
        subset < 1 << self.n && self.bits >> subset & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// Members in increasing bitmask order.
    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        (0..1u32 << self.n).filter(move |&m| self.contains(m))
    }

    pub fn is_subfamily(&self, other: &Family) -> bool {
        self.n == other.n && self.bits & !other.bits == 0
    }

    pub fn is_down_closed(&self) -> bool {
        *self == self.down_closure()
    }

    /// Smallest down-set containing every member.
    pub fn down_closure(&self) -> Family {
        let mut out = *self;
        // one pass per element: removing that element from every member
        for e in 0..self.n {
            for m in self.members_of(out.bits) {
                if m >> e & 1 == 1 {
                    out.bits |= 1 << (m & !(1 << e));
                }
            }
        }
        out
    }

    fn members_of(&self, bits: u64) -> Vec<u32> {
        (0..1u32 << self.n).filter(|&m| bits >> m & 1 == 1).collect()
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        self.same_carrier(other)?;
        Ok(Family { n: self.n, bits: self.bits | other.bits })
    }

    pub fn intersect(&self, other: &Family) -> Result<Family> {
        self.same_carrier(other)?;
        Ok(Family { n: self.n, bits: self.bits & other.bits })
    }

    fn same_carrier(&self, other: &Family) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(format!(
                "families over carriers of size {} and {}",
                self.n, other.n
            )))
        }
    }

    /// `↓{ φ(S) : S ∈ self }` on the codomain of `φ`.
    pub fn pushforward(&self, phi: &SetMap) -> Result<Family> {
        self.expect_carrier(phi.dom)?;
        Ok(Family::from_members(phi.cod, self.members().map(|s| phi.image(s))).down_closure())
    }

    /// `{ S ⊆ dom φ : φ(S) ∈ self }`.
    pub fn pullback_by_image(&self, phi: &SetMap) -> Result<Family> {
        self.expect_carrier(phi.cod)?;
        Ok(Family::from_members(
            phi.dom,
            (0..1u32 << phi.dom).filter(|&s| self.contains(phi.image(s))),
        ))
    }

    /// `{ S ⊆ cod φ : φ⁻¹(S) ∈ self }`.
    pub fn preimage_family(&self, phi: &SetMap) -> Result<Family> {
        self.expect_carrier(phi.dom)?;
        Ok(Family::from_members(
            phi.cod,
            (0..1u32 << phi.cod).filter(|&s| self.contains(phi.preimage(s))),
        ))
    }

    fn expect_carrier(&self, n: usize) -> Result<()> {
        if self.carrier_size() == n {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(format!(
                "family over {} elements used with a map on {n}",
                self.n
            )))
        }
    }

    /// Every down-set of `2^n` containing `∅`, in increasing bit order.
    pub fn all_nullities(n: usize) -> Vec<Family> {
        Self::check_size(n);
        // Down-sets containing ∅ correspond to antichains; enumerate by
        // growing closed families one subset at a time in bitmask order.
        let count = 1u32 << n;
        let mut out = Vec::new();
        let mut stack = vec![(1u32, Family::trivial(n))];
        while let Some((next, fam)) = stack.pop() {
            if next == count {
                out.push(fam);
                continue;
            }
            stack.push((next + 1, fam));
            // subsets of `next` all precede it numerically
            let all_below = (0..n).all(|e| next >> e & 1 == 0 || fam.contains(next & !(1 << e)));
            if all_below {
                stack.push((next + 1, fam.with(next)));
            }
        }
        out.sort();
        out
    }
}

/// A finite carrier with a down-set of its power set that contains `∅`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NullityStructure {
    carrier: FiniteSet,
    nulls: Family,
}

impl NullityStructure {
    pub fn new(carrier: FiniteSet, nulls: Family) -> Result<Self> {
        if carrier.len() != nulls.carrier_size() {
            return Err(Error::CarrierMismatch(format!(
                "carrier has {} elements, family is over {}",
                carrier.len(),
                nulls.carrier_size()
            )));
        }
        if !nulls.contains(0) {
            return Err(Error::InvalidNullity("the empty set must be null".into()));
        }
        if let Some(m) = nulls.members().find(|&m| {
            (0..carrier.len()).any(|e| m >> e & 1 == 1 && !nulls.contains(m & !(1 << e)))
        }) {
            return Err(Error::InvalidNullity(format!(
                "not a down-set: {{{}}} is null but a subset is not",
                carrier.subset_ids(m).join(",")
            )));
        }
        Ok(NullityStructure { carrier, nulls })
    }

    /// Builds from element-id lists.
    pub fn from_ids(carrier: FiniteSet, nulls: &[Vec<String>]) -> Result<Self> {
        if carrier.len() > MAX_CARRIER {
            return Err(Error::SizeBound {
                what: "carrier".into(),
                size: carrier.len(),
                limit: MAX_CARRIER,
            });
        }
        let mut fam = Family::empty(carrier.len());
        for set in nulls {
            let mut mask = 0u32;
            for e in set {
                let i = carrier.index_of(e).ok_or_else(|| {
                    Error::CarrierMismatch(format!("`{e}` is not a carrier element"))
                })?;
                mask |= 1 << i;
            }
            fam = fam.with(mask);
        }
        NullityStructure::new(carrier, fam)
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }

    pub fn nulls(&self) -> Family {
        self.nulls
    }

    pub fn is_null(&self, subset: u32) -> bool {
        self.nulls.contains(subset)
    }

    /// Null sets as sorted element-id arrays, ordered by bitmask.
    pub fn null_ids(&self) -> Vec<Vec<String>> {
        self.nulls.members().map(|m| self.carrier.subset_ids(m)).collect()
    }
}

impl Serialize for NullityStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut sets = self.null_ids();
        for set in &mut sets {
            set.sort();
        }
        sets.sort();
        sets.serialize(s)
    }
}

/// `{ S ⊆ cod f : f⁻¹(S) ∈ src }`. A down-set with `∅` whenever `src` is one.
pub fn preimage_nullity(
    f: &SetMap,
    src: &NullityStructure,
    cod: &FiniteSet,
) -> Result<NullityStructure> {
    if cod.len() != f.cod {
        return Err(Error::CarrierMismatch("codomain carrier does not match the map".into()));
    }
    NullityStructure::new(cod.clone(), src.nulls.preimage_family(f)?)
}

/// True iff `φ(S)` is `dst`-null for every `src`-null `S`.
pub fn image_preserves(phi: &SetMap, src: &NullityStructure, dst: &NullityStructure) -> Result<bool> {
    if src.carrier.len() != phi.dom || dst.carrier.len() != phi.cod {
        return Err(Error::CarrierMismatch("map does not match the carriers".into()));
    }
    Ok(src.nulls.members().all(|s| dst.is_null(phi.image(s))))
}

/// A null set of `src` whose image is not `dst`-null.
pub fn image_witness(phi: &SetMap, src: &NullityStructure, dst: &NullityStructure) -> Option<u32> {
    src.nulls.members().find(|&s| !dst.is_null(phi.image(s)))
}

/// Down-closed set of objects in a preorder category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DownSet {
    preorder: Arc<FinCategory>,
    members: Vec<bool>,
}

impl DownSet {
    pub fn members(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&o| self.members[o]).collect()
    }

    pub fn member_ids(&self) -> Vec<String> {
        self.members()
            .into_iter()
            .map(|o| self.preorder.object_id(o).to_string())
            .collect()
    }

    pub fn contains(&self, o: usize) -> bool {
        self.members[o]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn union(&self, other: &DownSet) -> Result<DownSet> {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &DownSet) -> Result<DownSet> {
        self.zip(other, |a, b| a && b)
    }

    fn zip(&self, other: &DownSet, op: impl Fn(bool, bool) -> bool) -> Result<DownSet> {
        if !crate::fincat::same_category(&self.preorder, &other.preorder) {
            return Err(Error::PreorderMismatch);
        }
        Ok(DownSet {
            preorder: self.preorder.clone(),
            members: self.members.iter().zip(&other.members).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    /// Every member's predecessors are members.
    pub fn is_down_closed(&self) -> bool {
        let p = &*self.preorder;
        (0..p.num_objects())
            .filter(|&b| self.members[b])
            .all(|b| p.incoming(b).iter().all(|&m| self.members[p.dom(m)]))
    }
}

/// Smallest down-set containing `seed`.
pub fn downward_closure(p: &Arc<FinCategory>, seed: &[usize]) -> Result<DownSet> {
    if !p.is_preorder() {
        return Err(Error::NotPreorder(p.name().to_string()));
    }
    let mut members = vec![false; p.num_objects()];
    let mut stack: Vec<usize> = seed.to_vec();
    while let Some(b) = stack.pop() {
        if std::mem::replace(&mut members[b], true) {
            continue;
        }
        stack.extend(p.incoming(b).iter().map(|&m| p.dom(m)));
    }
    Ok(DownSet {
        preorder: p.clone(),
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::power_set_preorder;
    use proptest::prelude::*;

    fn pset2() -> Arc<FinCategory> {
        Arc::new(power_set_preorder(&FiniteSet::new(["1", "2"]).unwrap()).unwrap())
    }

    #[test]
    fn closure_examples() {
        let p = pset2();
        assert_eq!(downward_closure(&p, &[0b11]).unwrap().len(), 4);
        assert_eq!(downward_closure(&p, &[0b01]).unwrap().member_ids(), vec!["{}", "{1}"]);
        assert!(downward_closure(&p, &[]).unwrap().is_empty());
        let not_pre = Arc::new(crate::fincat::FinCategory::clone(&two_parallel()));
        assert!(downward_closure(&not_pre, &[0]).is_err());
    }

    fn two_parallel() -> FinCategory {
        let mut b = crate::fincat::CategoryBuilder::new("par");
        b.object_with_identity("a");
        b.object_with_identity("b");
        b.morphism("f", "a", "b");
        b.morphism("g", "a", "b");
        b.build_with_identity_laws().unwrap()
    }

    #[test]
    fn union_intersect_examples() {
        let p = pset2();
        let a = downward_closure(&p, &[0b01]).unwrap();
        let b = downward_closure(&p, &[0b10]).unwrap();
        assert_eq!(a.union(&b).unwrap().member_ids(), vec!["{}", "{1}", "{2}"]);
        assert_eq!(a.intersect(&b).unwrap().member_ids(), vec!["{}"]);
        let none = downward_closure(&p, &[]).unwrap();
        assert_eq!(a.union(&none).unwrap(), a);
        let q = Arc::new(power_set_preorder(&FiniteSet::range(1)).unwrap());
        let d = downward_closure(&q, &[1]).unwrap();
        assert_eq!(a.union(&d).unwrap_err(), Error::PreorderMismatch);
    }

    fn ns(n: usize, members: &[u32]) -> NullityStructure {
        NullityStructure::new(FiniteSet::range(n), Family::from_members(n, members.iter().copied())).unwrap()
    }

    #[test]
    fn preimage_examples() {
        let src = ns(2, &[0, 1, 2]);
        let id = SetMap::identity(2);
        assert_eq!(preimage_nullity(&id, &src, &FiniteSet::range(2)).unwrap(), src);

        let konst = SetMap::new(2, 1, vec![0, 0]).unwrap();
        let r = preimage_nullity(&konst, &ns(2, &[0]), &FiniteSet::range(1)).unwrap();
        assert_eq!(r.nulls(), Family::trivial(1));

        let inc = SetMap::new(1, 2, vec![0]).unwrap();
        let r = preimage_nullity(&inc, &ns(1, &[0, 1]), &FiniteSet::range(2)).unwrap();
        assert_eq!(r.nulls(), Family::full(2));
        assert!(preimage_nullity(&inc, &ns(2, &[0]), &FiniteSet::range(2)).is_err());
    }

    #[test]
    fn image_examples() {
        let a = ns(2, &[0, 1]);
        assert!(image_preserves(&SetMap::identity(2), &a, &a).unwrap());
        let konst = SetMap::new(2, 1, vec![0, 0]).unwrap();
        assert!(!image_preserves(&konst, &a, &ns(1, &[0])).unwrap());
        assert!(image_preserves(&konst, &ns(2, &[0]), &ns(1, &[0])).unwrap());
    }

    #[test]
    fn rejects_invalid_structures() {
        assert!(NullityStructure::new(FiniteSet::range(2), Family::from_members(2, [1])).is_err());
        assert!(NullityStructure::new(FiniteSet::range(2), Family::from_members(2, [0, 3])).is_err());
    }

    #[test]
    fn counts_down_sets() {
        // down-sets of 2^n containing ∅: Dedekind numbers minus the empty family
        let counts: Vec<usize> = (0..=4).map(|n| Family::all_nullities(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 19, 167]);
        for f in Family::all_nullities(3) {
            assert!(f.is_down_closed() && f.contains(0));
        }
    }

    fn all_maps(d: usize, c: usize) -> Vec<SetMap> {
        let total = c.pow(d as u32);
        (0..total)
            .map(|mut code| {
                let map = (0..d)
                    .map(|_| {
                        let x = code % c;
                        code /= c;
                        x
                    })
                    .collect();
                SetMap::new(d, c, map).unwrap()
            })
            .collect()
    }

    #[test]
    fn preimage_is_functorial() {
        // every pair of composable maps on carriers of size 1..=3, every source nullity
        for a in 1..=3 {
            for b in 1..=3 {
                for c in 1..=3 {
                    for f in all_maps(a, b) {
                        for g in all_maps(b, c) {
                            let gf = g.after(&f);
                            for n in Family::all_nullities(a) {
                                let direct = n.preimage_family(&gf).unwrap();
                                let stepwise = n.preimage_family(&f).unwrap().preimage_family(&g).unwrap();
                                assert_eq!(direct, stepwise);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn injections_preserve_cardinality_bounds() {
        for a in 1..=4 {
            for b in a..=4 {
                for f in all_maps(a, b).into_iter().filter(SetMap::is_injective) {
                    for k in 0..=a {
                        let card = |n| Family::from_members(n, (0..1u32 << n).filter(|m| m.count_ones() as usize <= k));
                        let src = NullityStructure::new(FiniteSet::range(a), card(a)).unwrap();
                        let dst = NullityStructure::new(FiniteSet::range(b), card(b)).unwrap();
                        assert!(image_preserves(&f, &src, &dst).unwrap());
                    }
                }
            }
        }
    }

    fn arb_nullity(n: usize) -> impl Strategy<Value = Family> {
        any::<u64>().prop_map(move |bits| {
            let seeds = Family::from_bits(n, bits);
            seeds.down_closure().union(&Family::trivial(n)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn lattice_laws(a in arb_nullity(4), b in arb_nullity(4), c in arb_nullity(4)) {
            let u = |x: &Family, y: &Family| x.union(y).unwrap();
            let i = |x: &Family, y: &Family| x.intersect(y).unwrap();
            prop_assert_eq!(u(&a, &a), a);
            prop_assert_eq!(i(&a, &a), a);
            prop_assert_eq!(u(&a, &b), u(&b, &a));
            prop_assert_eq!(i(&a, &b), i(&b, &a));
            prop_assert_eq!(u(&u(&a, &b), &c), u(&a, &u(&b, &c)));
            prop_assert_eq!(i(&i(&a, &b), &c), i(&a, &i(&b, &c)));
            prop_assert!(u(&a, &b).is_down_closed());
            prop_assert!(i(&a, &b).is_down_closed());
        }

        #[test]
        fn pushforward_and_pullback_are_nullities(n in arb_nullity(3), code in 0usize..64) {
            let map: Vec<usize> = (0..3).map(|i| code >> (2 * i) & 3).map(|x| x % 3).collect();
            let phi = SetMap::new(3, 3, map).unwrap();
            let push = n.pushforward(&phi).unwrap();
            let pull = n.pullback_by_image(&phi).unwrap();
            prop_assert!(push.is_down_closed() && push.contains(0));
            prop_assert!(pull.is_down_closed() && pull.contains(0));
            // Galois connection: push ⊆ M iff N ⊆ pull(M)
            prop_assert!(n.is_subfamily(&push.pullback_by_image(&phi).unwrap()));
            prop_assert!(pull.pushforward(&phi).unwrap().is_subfamily(&n));
        }
    }
}
