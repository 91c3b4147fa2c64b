//! Exact computation of the inhomogeneous approximation constants
//! `M(alpha, gamma) = liminf |n| ||n alpha - gamma||` for period-two negative
//! continued fractions `alpha = [0; a, b, a, b, ...]^-`.

pub mod expansion;
pub mod ncf;
pub mod oracle;
pub mod quadfield;
pub mod spectrum;

pub use expansion::{
    block_digits, cuts, d_minus, d_plus, gamma_value, m_star, m_star_detail, m_value, parse_period, reflect, s_star,
    tseq_from_blocks, upper_bound_inf_t, upper_bound_inf_ta, Block, BlockKind, ExpansionError, MStar, MinRule, Parity,
    TSequence,
};
pub use ncf::{make_alpha, ncf_expand, NcfError, NcfForm, NegativeCf, PeriodTwoAlpha};
pub use oracle::{brute_force_min, brute_force_min_with, liminf_estimate, LiminfReport, OracleError, OracleMode, OracleReport};
pub use quadfield::{ArithOp, FieldError, QuadNum};
pub use spectrum::{
    class_tsequence, delta_closed_form, euclidean_test, family_limit, isolation_gap, spectrum_catalog, ClassId, Family,
    SpectrumCatalog, SpectrumError, SpectrumPoint,
};
