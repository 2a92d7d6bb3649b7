//! Basis blades of Cl(3,3) encoded as 6-bit masks.
//!
//! Bit `i` (i = 0, 1, 2) stands for the generator `e_{i+1}^+`, bit `i + 3` for
//! `e_{i+1}^-`. A blade is the ordered product of its generators in ascending
//! bit order.

use std::fmt;

/// Number of generators.
pub const DIM: usize = 6;
/// Number of basis blades.
pub const BLADES: usize = 1 << DIM;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BladeMask(u8);

impl BladeMask {
    pub const SCALAR: BladeMask = BladeMask(0);

    pub fn new(mask: u8) -> Option<Self> {
        (usize::from(mask) < BLADES).then_some(BladeMask(mask))
    }

    /// Blade of the positive generator `e_i^+`, `i` in 1..=3.
    pub fn plus(i: usize) -> Self {
        assert!((1..=3).contains(&i), "generator index {i} out of range");
        BladeMask(1 << (i - 1))
    }

    /// Blade of the negative generator `e_i^-`, `i` in 1..=3.
    pub fn minus(i: usize) -> Self {
        assert!((1..=3).contains(&i), "generator index {i} out of range");
        BladeMask(1 << (i + 2))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter_all() -> impl Iterator<Item = BladeMask> {
        (0..BLADES as u8).map(BladeMask)
    }
}

impl fmt::Display for BladeMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for bit in 0..DIM {
            if self.0 & (1 << bit) != 0 {
                if !first {
                    f.write_str("^")?;
                }
                first = false;
                let sign = if bit < 3 { '+' } else { '-' };
                write!(f, "e{}{}", bit % 3 + 1, sign)?;
            }
        }
        Ok(())
    }
}

/// Squares of the six generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub squares: [i8; DIM],
}

impl Signature {
    /// (+,+,+,-,-,-) with a Euclidean metric `g_ij = δ_ij` on both sectors.
    pub const CL33: Signature = Signature {
        squares: [1, 1, 1, -1, -1, -1],
    };
}

impl Default for Signature {
    fn default() -> Self {
        Signature::CL33
    }
}

/// Number of transpositions needed to move every factor of `b` past the
/// factors of `a` that follow it in canonical order.
fn reorder_parity(a: u8, b: u8) -> u32 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    swaps
}

/// Product of two basis blades under `sig`: returns the sign and the
/// resulting blade (`a XOR b`). A zero square yields sign 0.
pub fn blade_product_in(sig: &Signature, a: BladeMask, b: BladeMask) -> (i8, BladeMask) {
    let mut sign: i8 = if reorder_parity(a.0, b.0).is_multiple_of(2) {
        1
    } else {
        -1
    };
    let common = a.0 & b.0;
    for (bit, square) in sig.squares.iter().enumerate() {
        if common & (1 << bit) != 0 {
            sign *= square;
        }
    }
    (sign, BladeMask(a.0 ^ b.0))
}

/// Geometric product of two basis blades of Cl(3,3).
pub fn blade_geometric_product(a: BladeMask, b: BladeMask) -> (i8, BladeMask) {
    blade_product_in(&Signature::CL33, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(mask: u8) -> Vec<usize> {
        (0..DIM).filter(|bit| mask & (1 << bit) != 0).collect()
    }

    // Bubble-sort the concatenated factor list, counting swaps and
    // contracting equal neighbours.
    fn naive_product(sig: &Signature, a: u8, b: u8) -> (i8, u8) {
        let mut list = factors(a);
        list.extend(factors(b));
        let mut sign = 1i8;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < list.len() {
                if list[i] > list[i + 1] {
                    list.swap(i, i + 1);
                    sign = -sign;
                    changed = true;
                } else if list[i] == list[i + 1] {
                    sign *= sig.squares[list[i]];
                    list.drain(i..i + 2);
                    changed = true;
                    continue;
                }
                i += 1;
            }
            if !changed {
                break;
            }
        }
        let mask = list.iter().fold(0u8, |m, bit| m | (1 << bit));
        (sign, mask)
    }

    #[test]
    fn matches_sorted_list_oracle_exhaustively() {
        let sig = Signature::CL33;
        for a in BladeMask::iter_all() {
            for b in BladeMask::iter_all() {
                let (s, c) = blade_geometric_product(a, b);
                let (ns, nc) = naive_product(&sig, a.bits(), b.bits());
                assert_eq!((s, c.bits()), (ns, nc), "{a} * {b}");
            }
        }
    }

    #[test]
    fn generator_squares() {
        assert_eq!(
            blade_geometric_product(BladeMask::plus(1), BladeMask::plus(1)),
            (1, BladeMask::SCALAR)
        );
        assert_eq!(
            blade_geometric_product(BladeMask::minus(1), BladeMask::minus(1)),
            (-1, BladeMask::SCALAR)
        );
    }

    #[test]
    fn distinct_generators_anticommute() {
        let e1 = BladeMask::plus(1);
        let e2 = BladeMask::plus(2);
        let (s, c) = blade_geometric_product(e2, e1);
        assert_eq!(s, -1);
        assert_eq!(c.bits(), 0b11);
        assert_eq!(blade_geometric_product(e1, e2), (1, c));
    }

    #[test]
    fn grade_and_display() {
        let b = BladeMask::new(0b101001).unwrap();
        assert_eq!(b.grade(), 3);
        assert_eq!(b.to_string(), "e1+^e1-^e3-");
        assert!(BladeMask::new(64).is_none());
    }
}
