//! Extended-precision special functions used by every evaluation path.

mod delta;
mod efunc;
mod erfc;
mod zeta;

pub use delta::{cot_pi_reg, delta_minus, delta_plus, COT_SERIES_RADIUS};
pub use efunc::{e_asym, e_func};
pub use erfc::{erfc_complex, erfcx_right, pochhammer_half, MAX_CF_DEPTH, SERIES_RADIUS};
pub use zeta::{bernoulli_even, hurwitz_zeta_odd, BERNOULLI_COUNT};

pub(crate) use efunc::{eighth_turns, quad_phase};
pub(crate) use erfc::pow_half_integer;
