//! Weight-2 modular symbols for Gamma0(N) in the Manin presentation.
//!
//! Symbols (c : d) range over P^1(Z/N); (c : d) is g{0, oo} = {b/d, a/c} for any
//! g = [[a, b], [c, d]] in SL2(Z) with that bottom row. Relations: x + xS = 0 and
//! x + xT + xT^2 = 0 with S = [[0, -1], [1, 0]], T = [[0, -1], [1, -1]].

pub mod calibrate;
pub mod cusps;
pub mod heilbronn;
pub mod manin;
pub mod newform;
pub mod p1;
pub mod space;

pub use calibrate::{
    calibrate_normalization, calibrated_newform, calibrated_newform_in, class_label, CalibratedForm, CalibrationReport,
};
pub use cusps::{cusps_equivalent, Cusp};
pub use heilbronn::{heilbronn_cremona, heilbronn_merel};
pub use manin::{manin_path_decompose, CuspPath};
pub use p1::{P1Element, P1List};
pub use space::{genus_x0, ModSymSpace, DEFAULT_LEVEL_BOUND};
pub use newform::{
    rational_newforms, LatticeShape, NewformData, Normalization, Sign, SymbolTable,
    DEFAULT_EIGENVALUE_BOUND,
};
