//! The cell decompositions of the two- and three-qubit orbit spaces.

use std::fmt;

use serde::{Serialize, Serializer};

/// Static metadata for one cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellInfo {
    pub name: &'static str,
    /// Dimension of the cell itself (superscript of the name).
    pub cell_dimension: u8,
    /// Acín standard-form type; absent for two-qubit cells.
    pub acin_type: Option<&'static str>,
    pub slocc_class: &'static str,
    /// Dimension of the local-unitary orbit of any state in the cell.
    pub orbit_dimension: u8,
}

const fn info(
    name: &'static str,
    cell_dimension: u8,
    acin: &'static str,
    slocc_class: &'static str,
    orbit_dimension: u8,
) -> CellInfo {
    CellInfo {
        name,
        cell_dimension,
        acin_type: Some(acin),
        slocc_class,
        orbit_dimension,
    }
}

macro_rules! cell_enum {
    ($name:ident, $table:ident, [$($variant:ident => $info:expr,)*]) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant,)*
        }

        const $table: &[CellInfo] = &[$($info,)*];

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant,)*];

            pub fn info(self) -> &'static CellInfo {
                &$table[self as usize]
            }

            pub fn name(self) -> &'static str {
                self.info().name
            }

            pub fn from_name(name: &str) -> Option<Self> {
                Self::ALL.iter().copied().find(|c| c.name() == name)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.name())
            }
        }
    };
}

cell_enum!(Cell3, CELLS3, [
    ABC0 => info("e0_A-B-C", 0, "1", "A-B-C", 6),
    ABc1 => info("e1_A-BC", 1, "2a", "A-BC", 7),
    ABc0 => info("e0_A-BC", 0, "2a", "A-BC", 5),
    BAc1 => info("e1_B-AC", 1, "2a", "B-AC", 7),
    BAc0 => info("e0_B-AC", 0, "2a", "B-AC", 5),
    CAb1 => info("e1_C-AB", 1, "2a", "C-AB", 7),
    CAb0 => info("e0_C-AB", 0, "2a", "C-AB", 5),
    W3 => info("e3_W", 3, "4a", "W", 9),
    W2 => info("e2_W", 2, "3a", "W", 8),
    Ghz1 => info("e1_GHZ", 1, "2b", "GHZ", 7),
    AGhz1 => info("e1_A,GHZ", 1, "3b", "GHZ", 8),
    BGhz1 => info("e1_B,GHZ", 1, "3b", "GHZ", 8),
    CGhz1 => info("e1_C,GHZ", 1, "3b", "GHZ", 8),
    AGhz2 => info("e2_A,GHZ", 2, "3b", "GHZ", 8),
    BGhz2 => info("e2_B,GHZ", 2, "3b", "GHZ", 8),
    CGhz2 => info("e2_C,GHZ", 2, "3b", "GHZ", 8),
    BC2 => info("e2_BC", 2, "5", "GHZ", 9),
    AC2 => info("e2_AC", 2, "4b", "GHZ", 9),
    AB2 => info("e2_AB", 2, "4b", "GHZ", 9),
    BC3 => info("e3_BC", 3, "5", "GHZ", 9),
    AC3 => info("e3_AC", 3, "4b", "GHZ", 9),
    AB3 => info("e3_AB", 3, "4b", "GHZ", 9),
    ABC3 => info("e3_ABC", 3, "5", "GHZ", 9),
    Four => info("e4", 4, "5", "GHZ", 9),
    Five => info("e5", 5, "5", "GHZ", 9),
    Ghz0 => info("e0_GHZ", 0, "2b", "GHZ", 7),
]);

cell_enum!(Cell2, CELLS2, [
    Sep => CellInfo { name: "e0_SEP", cell_dimension: 0, acin_type: None, slocc_class: "unentangled", orbit_dimension: 4 },
    Partial => CellInfo { name: "e1", cell_dimension: 1, acin_type: None, slocc_class: "entangled", orbit_dimension: 5 },
    Epr => CellInfo { name: "e0_EPR", cell_dimension: 0, acin_type: None, slocc_class: "entangled", orbit_dimension: 3 },
]);
