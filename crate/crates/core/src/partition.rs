//! Exponent-space partition cells.
//!
//! The asymptotic form of the four root branches is uniform on each cell of
//! a finite partition of the exponent box. Different-speed parameters use a
//! 35-cell table (volumes `V`, faces `F`, lines `L`, points `P`; the
//! low-gamma copies carry a `b` infix, e.g. `Vb1`), same-speed parameters an
//! 11-cell table over the unit square (`t` infix, e.g. `Ft1`).
//!
//! Membership uses the printed inequalities verbatim, including exact
//! equalities for lower-dimensional cells; snap near-boundary decimal input
//! first (see `Params::snapped`). The same-speed table leaves the open edge
//! `beta = 0, 0 < alpha < 1/2` uncovered; `partition_cell` reports `NoCell`
//! there rather than inventing an assignment.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::Params;

/// Cell label. `V` = 3-d interior, `F` = 2-d face, `L` = 1-d line,
/// `P` = point; `b`-infixed labels are the low-gamma (`gamma < 1`) variants,
/// `t`-infixed labels the same-speed variants over the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum PartitionCell {
    // gamma in (1, 2] (V2/V5/V6/F56/L-cells also cover gamma = 1 as printed)
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    F12,
    F13,
    F24,
    F34,
    F35,
    F46,
    F56,
    L1234,
    L3456,
    // gamma = 1 specific cells
    F1,
    L12,
    L15,
    L26,
    P1256,
    // gamma in [1/2, 1) variants
    Vb1,
    Vb2,
    Vb3,
    Vb4,
    Vb5,
    Vb6,
    Fb12,
    Fb13,
    Fb24,
    Fb34,
    Fb35,
    Fb46,
    Fb56,
    Lb1234,
    Lb3456,
    // same-speed cells over the unit square
    Ft1,
    Ft2,
    Ft3,
    Ft4,
    Ft5,
    Lt13,
    Lt12,
    Lt35,
    Lt24,
    Lt45,
    Pt12345,
}

use PartitionCell::*;

/// All different-speed cells, in display order.
pub const DIFFERENT_SPEED_CELLS: [PartitionCell; 35] = [
    V1, V2, V3, V4, V5, V6, F12, F13, F24, F34, F35, F46, F56, L1234, L3456, F1, L12, L15, L26,
    P1256, Vb1, Vb2, Vb3, Vb4, Vb5, Vb6, Fb12, Fb13, Fb24, Fb34, Fb35, Fb46, Fb56, Lb1234, Lb3456,
];

/// All same-speed cells, in display order.
pub const SAME_SPEED_CELLS: [PartitionCell; 11] =
    [Ft1, Ft2, Ft3, Ft4, Ft5, Lt13, Lt12, Lt35, Lt24, Lt45, Pt12345];

impl PartitionCell {
    pub const fn as_str(&self) -> &'static str {
        match self {
            V1 => "V1",
            V2 => "V2",
            V3 => "V3",
            V4 => "V4",
            V5 => "V5",
            V6 => "V6",
            F12 => "F12",
            F13 => "F13",
            F24 => "F24",
            F34 => "F34",
            F35 => "F35",
            F46 => "F46",
            F56 => "F56",
            L1234 => "L1234",
            L3456 => "L3456",
            F1 => "F1",
            L12 => "L12",
            L15 => "L15",
            L26 => "L26",
            P1256 => "P1256",
            Vb1 => "Vb1",
            Vb2 => "Vb2",
            Vb3 => "Vb3",
            Vb4 => "Vb4",
            Vb5 => "Vb5",
            Vb6 => "Vb6",
            Fb12 => "Fb12",
            Fb13 => "Fb13",
            Fb24 => "Fb24",
            Fb34 => "Fb34",
            Fb35 => "Fb35",
            Fb46 => "Fb46",
            Fb56 => "Fb56",
            Lb1234 => "Lb1234",
            Lb3456 => "Lb3456",
            Ft1 => "Ft1",
            Ft2 => "Ft2",
            Ft3 => "Ft3",
            Ft4 => "Ft4",
            Ft5 => "Ft5",
            Lt13 => "Lt13",
            Lt12 => "Lt12",
            Lt35 => "Lt35",
            Lt24 => "Lt24",
            Lt45 => "Lt45",
            Pt12345 => "Pt12345",
        }
    }

    /// True for cells of the same-speed table.
    pub fn is_same_speed(&self) -> bool {
        SAME_SPEED_CELLS.contains(self)
    }

    /// Printed membership predicate.
    ///
    /// Same-speed cells test `(alpha, beta)` and require `a = gamma = 1`;
    /// different-speed cells test `(alpha, beta, gamma)` and require the
    /// point not to be same-speed.
    pub fn contains(&self, p: &Params) -> bool {
        let (al, be, ga) = (p.alpha, p.beta, p.gamma);
        if self.is_same_speed() != p.same_speed() {
            return false;
        }
        match self {
            V1 => (0.0..ga / 2.0).contains(&al) && (0.0..0.5).contains(&be) && 1.0 < ga && ga <= 2.0,
            V2 => {
                ga / 2.0 < al
                    && al <= (ga + 1.0) / 2.0
                    && 2.0 * al - 2.0 * be - ga + 1.0 > 0.0
                    && 0.0 <= be
                    && (1.0..=2.0).contains(&ga)
            }
            V3 => (0.0..ga / 2.0).contains(&al) && 0.5 < be && be < ga / 2.0 && 1.0 < ga && ga <= 2.0,
            V4 => {
                ga / 2.0 < al
                    && al < (ga + 1.0) / 2.0
                    && be <= 1.0
                    && be < al
                    && 2.0 * al - 2.0 * be - ga + 1.0 < 0.0
                    && 1.0 < ga
                    && ga <= 2.0
            }
            V5 => {
                0.0 <= al
                    && ga / 2.0 < be
                    && be <= 1.0
                    && 4.0 * al - 2.0 * be - ga < 0.0
                    && (1.0..2.0).contains(&ga)
            }
            V6 => {
                4.0 * al - 2.0 * be - ga > 0.0 && al < be && be <= 1.0 && (1.0..2.0).contains(&ga)
            }
            F12 => al == ga / 2.0 && (0.0..0.5).contains(&be) && 1.0 < ga && ga <= 2.0,
            F13 => (0.0..ga / 2.0).contains(&al) && be == 0.5 && 1.0 < ga && ga <= 2.0,
            F24 => {
                ga / 2.0 < al
                    && al <= (1.0 + ga) / 2.0
                    && 2.0 * al - 2.0 * be - ga + 1.0 == 0.0
                    && 1.0 < ga
                    && ga <= 2.0
            }
            F34 => al == ga / 2.0 && 0.5 < be && be < ga / 2.0 && 1.0 < ga && ga <= 2.0,
            F35 => (0.0..ga / 2.0).contains(&al) && be == ga / 2.0 && 1.0 < ga && ga <= 2.0,
            F46 => ga / 2.0 < al && al <= 1.0 && be == al && 1.0 < ga && ga < 2.0,
            F56 => {
                ga / 2.0 < al
                    && al <= (ga + 2.0) / 4.0
                    && 4.0 * al - 2.0 * be - ga == 0.0
                    && (1.0..2.0).contains(&ga)
            }
            L1234 => al == ga / 2.0 && be == 0.5 && 1.0 < ga && ga <= 2.0,
            L3456 => al == ga / 2.0 && be == ga / 2.0 && 1.0 < ga && ga <= 2.0,
            F1 => (0.0..0.5).contains(&al) && (0.0..0.5).contains(&be) && ga == 1.0,
            L12 => al == 0.5 && (0.0..0.5).contains(&be) && ga == 1.0,
            L15 => (0.0..0.5).contains(&al) && be == 0.5 && ga == 1.0,
            L26 => 0.5 < al && al <= 1.0 && be == al && ga == 1.0,
            P1256 => al == 0.5 && be == 0.5 && ga == 1.0,
            Vb1 => (0.0..0.5).contains(&al) && (0.0..0.5).contains(&be) && (0.5..1.0).contains(&ga),
            Vb2 => {
                0.5 < al
                    && al <= (ga + 1.0) / 2.0
                    && (0.0..al).contains(&be)
                    && (0.5..1.0).contains(&ga)
            }
            Vb3 => {
                (0.0..0.5).contains(&al)
                    && 0.5 < be
                    && be < 1.0 - ga / 2.0
                    && (0.5..1.0).contains(&ga)
            }
            Vb4 => {
                0.5 < al
                    && al <= (ga + 1.0) / 2.0
                    && be > al
                    && 2.0 * al - 2.0 * be - ga + 1.0 > 0.0
                    && (0.5..1.0).contains(&ga)
            }
            Vb5 => {
                0.0 <= al
                    && 1.0 - ga / 2.0 < be
                    && be <= 1.0
                    && 4.0 * al - 2.0 * be - ga < 0.0
                    && (0.5..1.0).contains(&ga)
            }
            Vb6 => {
                4.0 * al - 2.0 * be - ga > 0.0
                    && 2.0 * al - 2.0 * be - ga + 1.0 < 0.0
                    && be <= 1.0
                    && (0.5..1.0).contains(&ga)
            }
            Fb12 => al == 0.5 && (0.0..0.5).contains(&be) && (0.5..1.0).contains(&ga),
            Fb13 => (0.0..0.5).contains(&al) && be == 0.5 && (0.5..1.0).contains(&ga),
            Fb24 => 0.5 < al && al <= (1.0 + ga) / 2.0 && be == al && (0.5..1.0).contains(&ga),
            Fb34 => al == 0.5 && 0.5 < be && be < 1.0 - ga / 2.0 && (0.5..1.0).contains(&ga),
            Fb35 => (0.0..0.5).contains(&al) && be == 1.0 - ga / 2.0 && (0.5..1.0).contains(&ga),
            Fb46 => {
                0.5 < al
                    && al <= (1.0 + ga) / 2.0
                    && 2.0 * al - 2.0 * be - ga + 1.0 == 0.0
                    && (0.5..1.0).contains(&ga)
            }
            Fb56 => {
                0.5 < al
                    && al <= (ga + 2.0) / 4.0
                    && 4.0 * al - 2.0 * be - ga == 0.0
                    && (0.5..1.0).contains(&ga)
            }
            Lb1234 => al == 0.5 && be == 0.5 && (0.5..1.0).contains(&ga),
            Lb3456 => al == 0.5 && be == 1.0 - ga / 2.0 && (0.5..1.0).contains(&ga),
            Ft1 => be < al && al < 0.5 && 0.0 < be && be < 0.5,
            Ft2 => 0.5 < al && al <= 1.0 && (0.0..al).contains(&be),
            Ft3 => 0.0 <= al && al < be && 0.0 < be && be < 0.5,
            Ft4 => 4.0 * al - 2.0 * be - 1.0 > 0.0 && al < be && be <= 1.0,
            Ft5 => 0.0 <= al && 0.5 < be && be <= 1.0 && 4.0 * al - 2.0 * be - 1.0 < 0.0,
            Lt13 => (0.0..0.5).contains(&al) && be == al,
            Lt12 => al == 0.5 && (0.0..0.5).contains(&be),
            Lt35 => (0.0..0.5).contains(&al) && be == 0.5,
            Lt24 => 0.5 < al && al <= 1.0 && be == al,
            Lt45 => 0.5 < al && al <= 0.75 && 4.0 * al - 2.0 * be - 1.0 == 0.0,
            Pt12345 => al == 0.5 && be == 0.5,
        }
    }
}

impl fmt::Display for PartitionCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Map a parameter tuple to its unique partition cell.
///
/// Errors: `InvalidParams` outside the admissible box, `NoCell` when the
/// printed tables leave the point uncovered (the known same-speed
/// `beta = 0` edge), `CellOverlap` if several predicates fire (would signal
/// a transcription fault).
pub fn partition_cell(p: &Params) -> Result<PartitionCell> {
    if let Some(reason) = p.box_violation() {
        return Err(Error::InvalidParams(reason));
    }
    let table: &[PartitionCell] =
        if p.same_speed() { &SAME_SPEED_CELLS } else { &DIFFERENT_SPEED_CELLS };
    let hits: Vec<PartitionCell> = table.iter().filter(|c| c.contains(p)).copied().collect();
    match hits.len() {
        1 => Ok(hits[0]),
        0 => Err(Error::NoCell { alpha: p.alpha, beta: p.beta, gamma: p.gamma }),
        _ => Err(Error::CellOverlap {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            cells: hits.iter().map(|c| c.to_string()).collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(al: f64, be: f64, ga: f64, a: f64) -> Params {
        Params::new(al, be, ga, a).unwrap()
    }

    #[test]
    fn frozen_cell_assignments() {
        assert_eq!(partition_cell(&p(0.3, 0.3, 1.5, 2.0)).unwrap(), V1);
        assert_eq!(partition_cell(&p(0.5, 0.25, 1.0, 2.0)).unwrap(), L12);
        assert_eq!(partition_cell(&p(0.25, 0.25, 1.0, 1.0)).unwrap(), Lt13);
        assert_eq!(partition_cell(&p(0.75, 0.5, 1.5, 2.0)).unwrap(), L1234);
        assert_eq!(partition_cell(&p(0.75, 0.75, 1.5, 2.0)).unwrap(), L3456);
        assert_eq!(partition_cell(&p(0.5, 0.5, 1.0, 1.0)).unwrap(), Pt12345);
        assert_eq!(partition_cell(&p(0.4, 0.4, 1.0, 1.0)).unwrap(), Lt13);
        assert_eq!(partition_cell(&p(0.3, 0.7, 0.75, 2.0)).unwrap(), Vb5);
    }

    #[test]
    fn gamma_one_routes_to_its_own_cells_for_different_speed() {
        // At gamma = 1 with a != 1, low corner belongs to F1, not V1/Vb1.
        assert_eq!(partition_cell(&p(0.3, 0.3, 1.0, 2.0)).unwrap(), F1);
        // Upper cells still come from the shared table rows that include
        // gamma = 1.
        assert_eq!(partition_cell(&p(0.9, 0.2, 1.0, 2.0)).unwrap(), V2);
        assert_eq!(partition_cell(&p(0.2, 0.8, 1.0, 2.0)).unwrap(), V5);
    }

    #[test]
    fn same_speed_beta_zero_edge_is_a_printed_gap() {
        // The same-speed table genuinely does not cover beta = 0 with
        // 0 < alpha < 1/2; the honest answer is NoCell.
        let q = p(0.3, 0.0, 1.0, 1.0);
        assert!(matches!(partition_cell(&q), Err(Error::NoCell { .. })));
        // But beta = 0 with alpha > 1/2 is covered (Ft2 admits beta = 0).
        assert_eq!(partition_cell(&p(0.7, 0.0, 1.0, 1.0)).unwrap(), Ft2);
    }

    #[test]
    fn out_of_box_is_invalid_input() {
        let q = Params::exploratory(2.0, 0.5, 2.0, 2.0, 1.0, 1.0).unwrap();
        assert!(matches!(partition_cell(&q), Err(Error::InvalidParams(_))));
    }
}
