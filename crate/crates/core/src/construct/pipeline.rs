use serde::Serialize;

use crate::comma::ProbeCommas;
use crate::construct::Setup;
use crate::error::{Error, Result};
use crate::fincat::Carrier;
use crate::kan::{left_kan, right_kan, KanOptions, KanResult};
use crate::nullity::{check_nullity_assignment, NullityAssignment};
use crate::order::Family;

/// A comma morphism along which comma nullity fails to be image-preserving.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonFunctorial {
    pub morphism: String,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub commas: ProbeCommas,
    /// On `Comma(j₁j₂, M)`, carrier `γ ∘ Forget₂`.
    pub comma_null: Vec<Family>,
    /// On `Comma(j₂, π)`, carrier `γ ∘ Forget₂`.
    pub probed_null: Vec<Family>,
    pub main_null: NullityAssignment,
    pub probed_kan: KanResult,
    pub main_kan: KanResult,
    /// Violations along comma morphisms that change the base object.
    pub non_vertical: Vec<NonFunctorial>,
}

/// `(b, T, m) ↦ { S ⊆ γ m : γ(T)⁻¹ S ∈ base(b) }` on `Comma(j₁j₂, M)`.
pub fn comma_nullity(s: &Setup, commas: &ProbeCommas) -> Result<Vec<Family>> {
    commas
        .cjm
        .objects
        .iter()
        .map(|&(b, t, _)| s.base[b].preimage_family(s.gamma.map(t)))
        .collect()
}

/// Splits image-preservation failures of comma nullity into vertical ones
/// (`f = id`), which are returned as an error, and the rest.
pub fn comma_functoriality(s: &Setup, commas: &ProbeCommas, values: &[Family]) -> Result<Vec<NonFunctorial>> {
    let cjm = &commas.cjm;
    let cat = &*cjm.category;
    let mut non_vertical = Vec::new();
    for (k, &(f, g)) in cjm.morphisms.iter().enumerate() {
        let (x, y) = (cat.dom(k), cat.cod(k));
        let phi = s.gamma.map(g);
        let Some(bad) = values[x].members().find(|&a| !values[y].contains(phi.image(a))) else {
            continue;
        };
        let m = cjm.objects[x].2;
        let witness = vec![
            cat.morphism_id(k).to_string(),
            format!("{{{}}}", s.gamma.sets[m].subset_ids(bad).join(",")),
        ];
        if s.b.is_identity(f) {
            return Err(Error::NotFunctorial(witness.join(" ")));
        }
        non_vertical.push(NonFunctorial {
            morphism: witness[0].clone(),
            witness,
        });
    }
    Ok(non_vertical)
}

/// Comma nullity → right Kan along `π_*` → left Kan along `Forget₂`.
pub fn run_pipeline(s: &Setup, opts: KanOptions) -> Result<PipelineResult> {
    let commas = s.probe_commas()?;
    let comma_null = comma_nullity(s, &commas)?;
    let non_vertical = comma_functoriality(s, &commas, &comma_null)?;

    let cjp_carrier: Carrier = s.gamma.along(&commas.cjp.forget2);
    let probed_kan = right_kan(&commas.pi_star, &cjp_carrier, &comma_null, opts)?;
    let probed_null = probed_kan.values.clone();

    let main_kan = left_kan(&commas.cjp.forget2, &s.gamma, &probed_null, opts)?;
    let main_null = NullityAssignment::new(s.m.clone(), s.gamma.clone(), main_kan.values.clone())?;
    let report = check_nullity_assignment(&main_null);
    if let Some(v) = report.violations.first() {
        return Err(Error::Invariance(format!("{} {}", v.rule, v.witness.join(" "))));
    }
    Ok(PipelineResult {
        commas,
        comma_null,
        probed_null,
        main_null,
        probed_kan,
        main_kan,
        non_vertical,
    })
}

/// Max-min oracle with plain loops: for each `V`, the union over probes
/// `A: j₂ b → π V` of the intersection over lifts `T: j₁j₂ b → V` with
/// `π T = A` of `{ S : γ(T)⁻¹ S ∈ base(b) }`.
pub fn direct_prevalence(s: &Setup) -> Result<Vec<Family>> {
    let (b, i, m) = (&*s.b, &*s.i, &*s.m);
    let mut out = Vec::with_capacity(m.num_objects());
    for v in 0..m.num_objects() {
        let n = s.gamma.size(v);
        let full = (1u32 << n) - 1;
        let mut null = vec![false; 1 << n];
        null[0] = true;
        for x in 0..b.num_objects() {
            let src = s.j1.ob(s.j2.ob(x));
            for a in i.hom(s.j2.ob(x), s.pi.ob(v)) {
                let lifts: Vec<usize> = m.hom(src, v).into_iter().filter(|&t| s.pi.mor(t) == a).collect();
                for set in 0..=full {
                    let all = lifts.iter().all(|&t| {
                        let g = s.gamma.map(t);
                        let mut pre = 0u32;
                        for e in 0..g.dom {
                            if set >> g.map[e] & 1 == 1 {
                                pre |= 1 << e;
                            }
                        }
                        s.base[x].contains(pre)
                    });
                    if all {
                        null[set as usize] = true;
                    }
                }
            }
        }
        out.push(Family::from_members(n, (0..=full).filter(|&x| null[x as usize])));
    }
    Ok(out)
}

/// Objects where two assignments differ.
pub fn oracle_diff(s: &Setup, a: &[Family], b: &[Family]) -> Vec<String> {
    (0..s.m.num_objects())
        .filter(|&v| a[v] != b[v])
        .map(|v| s.m.object_id(v).to_string())
        .collect()
}
