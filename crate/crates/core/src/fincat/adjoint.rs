use crate::error::Result;
use crate::fincat::{Budget, Functor, NatTrans};

use super::find_natural_transformation;

/// Some `T ∘ T* ⇒ Id_B`, for `T: A → B`, `T*: B → A`.
pub fn find_pre_right_adjoint(
    t: &Functor,
    t_star: &Functor,
    budget: &mut Budget,
) -> Result<Option<NatTrans>> {
    let tt = t.after(t_star)?;
    find_natural_transformation(&tt, &Functor::identity(t.target.clone()), budget)
}

/// Some `Id_B ⇒ T ∘ T*`.
pub fn find_post_right_adjoint(
    t: &Functor,
    t_star: &Functor,
    budget: &mut Budget,
) -> Result<Option<NatTrans>> {
    let tt = t.after(t_star)?;
    find_natural_transformation(&Functor::identity(t.target.clone()), &tt, budget)
}

pub fn check_pre_right_adjoint(t: &Functor, t_star: &Functor, budget: &mut Budget) -> Result<bool> {
    Ok(find_pre_right_adjoint(t, t_star, budget)?.is_some())
}

pub fn check_post_right_adjoint(t: &Functor, t_star: &Functor, budget: &mut Budget) -> Result<bool> {
    Ok(find_post_right_adjoint(t, t_star, budget)?.is_some())
}
