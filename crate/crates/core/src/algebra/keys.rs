use std::fmt;

/// Basis of L: `t0^i t^m` with `i` a residue mod 2, plus the central `c1`, `c2`.
///
/// Variant and field order give the canonical ordering: central keys first,
/// then torus keys by `m` (lexicographic) and `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LKey {
    C1,
    C2,
    Torus { m: (i64, i64), i: u8 },
}

impl LKey {
    /// `t0^i t^m`; `i` is reduced mod 2.
    pub fn t(i: i64, m: (i64, i64)) -> Self {
        LKey::Torus {
            m,
            i: i.rem_euclid(2) as u8,
        }
    }

    /// Whether the key is a basis vector of L (`t0^0 t^0` is not).
    pub fn is_valid(&self) -> bool {
        !matches!(self, LKey::Torus { m: (0, 0), i: 0 })
    }

    pub fn is_central(&self) -> bool {
        matches!(self, LKey::C1 | LKey::C2)
    }
}

impl fmt::Display for LKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LKey::C1 => write!(f, "c1"),
            LKey::C2 => write!(f, "c2"),
            LKey::Torus { m, i } => write!(f, "t0^{} t^({},{})", i, m.0, m.1),
        }
    }
}

/// Basis of tau: `E_ij(t^m)` and the central `K1`, `K2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TauKey {
    K1,
    K2,
    Mat { m: (i64, i64), i: u8, j: u8 },
}

impl TauKey {
    pub fn e(i: u8, j: u8, m: (i64, i64)) -> Self {
        assert!(
            (1..=2).contains(&i) && (1..=2).contains(&j),
            "matrix index out of range"
        );
        TauKey::Mat { m, i, j }
    }
}

impl fmt::Display for TauKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauKey::K1 => write!(f, "K1"),
            TauKey::K2 => write!(f, "K2"),
            TauKey::Mat { m, i, j } => write!(f, "E{}{}(t^({},{}))", i, j, m.0, m.1),
        }
    }
}

/// Basis of the affine algebra: `E12(x^j)`, `H(x^j)`, `E21(x^j)` and `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AffKey {
    K,
    E12(i64),
    H(i64),
    E21(i64),
}

impl fmt::Display for AffKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffKey::K => write!(f, "K"),
            AffKey::E12(j) => write!(f, "E12(x^{})", j),
            AffKey::H(j) => write!(f, "H(x^{})", j),
            AffKey::E21(j) => write!(f, "E21(x^{})", j),
        }
    }
}
