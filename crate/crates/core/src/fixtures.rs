//! Reference squares shipped with the crate.
//!
//! The integer bases, their power squares, and the glued dihedral squares
//! for `m = 4`, `m = 5` and `m = 5` translated by one. The `D_4` rectangle
//! is a `2 × 4` magic rectangle with different row and column constants.

use crate::base::IntMagicSquare;
use crate::grid::GroupGrid;
use crate::io;

pub const BASE_M4: &str = include_str!("../fixtures/m4.txt");
pub const BASE_M5: &str = include_str!("../fixtures/m5.txt");
pub const BASE_M5_TRANSLATED: &str = include_str!("../fixtures/m5_translated.txt");

pub const POWER_M4: [&str; 3] = [
    include_str!("../fixtures/m4_E.txt"),
    include_str!("../fixtures/m4_O.txt"),
    include_str!("../fixtures/m4_T.txt"),
];
pub const POWER_M5: [&str; 3] = [
    include_str!("../fixtures/m5_E.txt"),
    include_str!("../fixtures/m5_O.txt"),
    include_str!("../fixtures/m5_T.txt"),
];
pub const POWER_M5_TRANSLATED: [&str; 3] = [
    include_str!("../fixtures/m5_translated_E.txt"),
    include_str!("../fixtures/m5_translated_O.txt"),
    include_str!("../fixtures/m5_translated_T.txt"),
];

pub const D32_SIDE8: &str = include_str!("../fixtures/d32_side8.txt");
pub const D50_SIDE10: &str = include_str!("../fixtures/d50_side10.txt");
pub const D50_SIDE10_TRANSLATED: &str = include_str!("../fixtures/d50_side10_translated.txt");
pub const D4_RECT_2X4: &str = include_str!("../fixtures/d4_rect2x4.txt");

/// Every shipped file, by name.
pub const ALL: [(&str, &str); 16] = [
    ("m4.txt", BASE_M4),
    ("m5.txt", BASE_M5),
    ("m5_translated.txt", BASE_M5_TRANSLATED),
    ("m4_E.txt", POWER_M4[0]),
    ("m4_O.txt", POWER_M4[1]),
    ("m4_T.txt", POWER_M4[2]),
    ("m5_E.txt", POWER_M5[0]),
    ("m5_O.txt", POWER_M5[1]),
    ("m5_T.txt", POWER_M5[2]),
    ("m5_translated_E.txt", POWER_M5_TRANSLATED[0]),
    ("m5_translated_O.txt", POWER_M5_TRANSLATED[1]),
    ("m5_translated_T.txt", POWER_M5_TRANSLATED[2]),
    ("d32_side8.txt", D32_SIDE8),
    ("d50_side10.txt", D50_SIDE10),
    ("d50_side10_translated.txt", D50_SIDE10_TRANSLATED),
    ("d4_rect2x4.txt", D4_RECT_2X4),
];

pub fn base_m4() -> IntMagicSquare {
    IntMagicSquare::from_text(BASE_M4).expect("fixture m4")
}

pub fn base_m5() -> IntMagicSquare {
    IntMagicSquare::from_text(BASE_M5).expect("fixture m5")
}

pub fn base_m5_translated() -> IntMagicSquare {
    IntMagicSquare::from_text(BASE_M5_TRANSLATED).expect("fixture m5 translated")
}

pub fn grid(text: &str) -> GroupGrid {
    io::parse_text(text).expect("grid fixture")
}
