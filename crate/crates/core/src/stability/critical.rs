use std::sync::OnceLock;

use crate::exactpoly::RationalPoly;

/// The boundary polynomials in `(c1, c2, k)` that decide stability at k1 = k2 = k.
#[derive(Debug, Clone)]
pub struct CriticalPolynomials {
    pub r1: RationalPoly,
    pub r2: RationalPoly,
    pub r3: RationalPoly,
    pub r4: RationalPoly,
    pub a1: RationalPoly,
    pub a2: RationalPoly,
    pub a3: RationalPoly,
}

/// Golden text of each polynomial, canonical form.
pub const GOLDEN: [(&str, &str); 7] = [
    ("R1", include_str!("../../data/appendix/r1.txt")),
    ("R2", include_str!("../../data/appendix/r2.txt")),
    ("R3", include_str!("../../data/appendix/r3.txt")),
    ("R4", include_str!("../../data/appendix/r4.txt")),
    ("A1", include_str!("../../data/appendix/a1.txt")),
    ("A2", include_str!("../../data/appendix/a2.txt")),
    ("A3", include_str!("../../data/appendix/a3.txt")),
];

pub const VARS: [&str; 3] = ["c1", "c2", "k"];

impl CriticalPolynomials {
    pub fn get(&self, name: &str) -> Option<&RationalPoly> {
        Some(match name {
            "R1" => &self.r1,
            "R2" => &self.r2,
            "R3" => &self.r3,
            "R4" => &self.r4,
            "A1" => &self.a1,
            "A2" => &self.a2,
            "A3" => &self.a3,
            _ => return None,
        })
    }
}

/// Parsed once from the golden files and shared thereafter.
pub fn critical_polynomials() -> &'static CriticalPolynomials {
    static CELL: OnceLock<CriticalPolynomials> = OnceLock::new();
    CELL.get_or_init(|| {
        let p = |i: usize| RationalPoly::parse(GOLDEN[i].1.trim(), &VARS).expect("golden polynomial parses");
        CriticalPolynomials { r1: p(0), r2: p(1), r3: p(2), r4: p(3), a1: p(4), a2: p(5), a3: p(6) }
    })
}
