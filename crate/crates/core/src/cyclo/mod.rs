//! Exact arithmetic in `Q(ζ_N)`, truncated q-series over it, the twisted
//! Eisenstein and f-invariant expansions, and a divided-congruence
//! membership test.

mod congruence;
mod field;
mod forms;
mod series;

pub use congruence::{divided_congruence_member, recommended_order, CongruenceVerdict};
pub use field::{cyclotomic_polynomial, euler_phi, CycloRational, CyclotomicField};
pub use forms::{
    discriminant_sums, eisenstein_qexp, f_invariant_series, f_invariant_series_for, lift_series,
    nu_squared_series, top_form_series, twisted_divisor_sum,
};
pub use series::QSeries;
