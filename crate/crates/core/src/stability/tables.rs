//! Sample points of the two stability tables with their published verdicts.

use num_rational::BigRational;

use crate::exactpoly::ratio;
use crate::model::Substitutability;

/// One published row: parameters, stability and the signs of the two
/// leading critical polynomials (R1, R2 for α = 1/2; R3, R4 for α = 1/3).
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub c1: BigRational,
    pub c2: BigRational,
    pub k: BigRational,
    pub stable: bool,
    pub signs: [i8; 2],
}

type Raw = ((i64, i64), (i64, i64), bool, i8, i8);

fn rows(c2s: &[(i64, i64)], per: &[&[Raw]]) -> Vec<TableRow> {
    let mut out = Vec::new();
    for (c2, group) in c2s.iter().zip(per) {
        for &(_, k, stable, s1, s2) in group.iter() {
            out.push(TableRow {
                c1: ratio(1, 1),
                c2: ratio(c2.0, c2.1),
                k: ratio(k.0, k.1),
                stable,
                signs: [s1, s2],
            });
        }
    }
    out
}

const Y: bool = true;
const N: bool = false;
const U: (i64, i64) = (1, 1);

/// 32 rows for α = 1/2 (c1 = 1).
pub fn table_half() -> Vec<TableRow> {
    let k = |n: i64| (n, 1);
    rows(
        &[(1, 4), (5, 16), (1, 2), (7, 8), (9, 8), (2, 1), (3, 1), (4, 1)],
        &[
            &[(U, k(1), Y, 1, 1), (U, k(7), N, -1, 1), (U, k(29), N, -1, -1), (U, k(51), N, 1, -1)],
            &[(U, k(1), Y, 1, 1), (U, k(10), N, -1, 1), (U, k(30), N, -1, -1), (U, k(51), N, 1, -1)],
            &[(U, k(1), Y, 1, 1), (U, k(18), N, -1, 1), (U, k(35), N, -1, -1), (U, k(53), N, 1, -1)],
            &[(U, k(1), Y, 1, 1), (U, k(38), N, -1, 1), (U, k(51), N, -1, -1), (U, k(65), N, 1, -1)],
            &[(U, k(1), Y, 1, 1), (U, k(49), N, -1, 1), (U, k(66), N, -1, -1), (U, k(83), N, 1, -1)],
            &[(U, k(1), Y, 1, 1), (U, k(70), N, -1, 1), (U, k(140), N, -1, -1), (U, k(209), N, 1, -1)],
            &[(U, k(1), Y, 1, 1), (U, k(91), N, -1, 1), (U, k(272), N, -1, -1), (U, k(453), N, 1, -1)],
            &[(U, k(1), Y, 1, 1), (U, k(112), N, -1, 1), (U, k(462), N, -1, -1), (U, k(811), N, 1, -1)],
        ],
    )
}

/// 40 rows for α = 1/3 (c1 = 1).
pub fn table_third() -> Vec<TableRow> {
    let k = |n: i64| (n, 1);
    rows(
        &[(1, 4), (3, 8), (5, 8), (7, 8), (5, 4), (3, 2), (2, 1), (3, 1)],
        &[
            &[(U, (1, 512), Y, -1, 1), (U, k(1), Y, 1, 1), (U, k(34), N, -1, 1), (U, k(153), N, -1, -1), (U, k(273), N, 1, -1)],
            &[(U, (1, 128), Y, -1, 1), (U, k(1), Y, 1, 1), (U, k(64), N, -1, 1), (U, k(175), N, -1, -1), (U, k(287), N, 1, -1)],
            &[(U, (1, 32), Y, -1, 1), (U, k(1), Y, 1, 1), (U, k(145), N, -1, 1), (U, k(231), N, -1, -1), (U, k(317), N, 1, -1)],
            &[(U, (1, 128), Y, -1, 1), (U, k(1), Y, 1, 1), (U, k(244), N, -1, 1), (U, k(302), N, -1, -1), (U, k(361), N, 1, -1)],
            &[(U, (1, 32), Y, -1, 1), (U, k(1), Y, 1, 1), (U, k(335), N, -1, 1), (U, k(436), N, -1, -1), (U, k(538), N, 1, -1)],
            &[(U, (1, 16), Y, -1, 1), (U, k(1), Y, 1, 1), (U, k(362), N, -1, 1), (U, k(544), N, -1, -1), (U, k(726), N, 1, -1)],
            &[(U, (1, 16), Y, -1, 1), (U, k(1), Y, 1, 1), (U, k(403), N, -1, 1), (U, k(804), N, -1, -1), (U, k(1205), N, 1, -1)],
            &[(U, (1, 16), Y, -1, 1), (U, k(1), Y, 1, 1), (U, k(471), N, -1, 1), (U, k(1503), N, -1, -1), (U, k(2536), N, 1, -1)],
        ],
    )
}

pub fn table(alpha: Substitutability) -> Vec<TableRow> {
    match alpha {
        Substitutability::Half => table_half(),
        Substitutability::Third => table_third(),
    }
}
