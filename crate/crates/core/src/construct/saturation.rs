use crate::construct::Setup;
use crate::error::Result;
use crate::nullity::NullityAssignment;
use crate::order::Family;

/// `n̄(A) = ⋃_{φ: A' → A} { S : γ(φ)⁻¹ S ∈ n(A') }`. Contains `n(A)` through
/// the identity.
pub fn bar_null(n: &NullityAssignment) -> Result<NullityAssignment> {
    let c = &*n.source;
    let mut out: Vec<Family> = n.nulls.clone();
    for m in 0..c.num_morphisms() {
        let (a, b) = (c.dom(m), c.cod(m));
        let pulled = n.nulls[a].preimage_family(n.carrier.map(m))?;
        out[b] = out[b].union(&pulled)?;
    }
    NullityAssignment::new(n.source.clone(), n.carrier.clone(), out)
}

pub fn is_saturated(n: &NullityAssignment) -> Result<bool> {
    Ok(bar_null(n)?.nulls == n.nulls)
}

/// Whether the base nullity on `B` (carrier `γ ∘ j₁j₂`) is saturated.
pub fn base_is_saturated(s: &Setup) -> Result<bool> {
    is_saturated(&s.base_assignment()?)
}

/// Some `φ: j₁j₂ b → V` carries the whole base nullity at `b` into `nulls`.
pub fn is_testable(s: &Setup, v: usize, nulls: Family) -> Result<bool> {
    let j1j2 = s.j1j2()?;
    for b in 0..s.b.num_objects() {
        for phi in s.m.hom(j1j2.ob(b), v) {
            if s.base[b].pushforward(s.gamma.map(phi))?.is_subfamily(&nulls) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
