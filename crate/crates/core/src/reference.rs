//! Published reference values used for comparisons and examples.

/// First twenty cosine coefficients `f_1..f_20` of the published degree-30000
/// near-optimizer (computed with `R = 4000`).
pub const PUBLISHED_PREFIX: [f64; 20] = [
    -0.297647135,
    0.216257252,
    -0.178150116,
    0.154960786,
    -0.138963721,
    0.12707629,
    -0.117795585,
    0.11029022,
    -0.104058086,
    0.09877573,
    -0.094224143,
    0.090249054,
    -0.086738237,
    0.083607805,
    -0.080793794,
    0.07824618,
    -0.075925462,
    0.073799849,
    -0.071843457,
    0.0700349,
];

/// Published certified lower bound on μ₂².
pub const MU2_SQUARED_LOWER: f64 = 0.574635728;

/// Published certified upper bound on μ₂².
pub const MU2_SQUARED_UPPER: f64 = 0.574643711;

/// Published value of `‖f_c ∗ f_c‖₂²` at `c = 0.4942` (error below 5e-9).
pub const FAMILY_BEST_NORM: f64 = 0.5746482;

/// Published optimal family exponent.
pub const FAMILY_BEST_C: f64 = 0.4942;
