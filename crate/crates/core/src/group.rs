//! Coarser orbit structure: orbits of `GL3 × H` and `GL3 × GL2` on nilpotent
//! pairs, and the Hesselink strata.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hom::orbit_dim;
use crate::label::{representative, ExtParam, OrbitLabel};
use crate::matrix::Matrix;
use crate::poset::Hasse;
use crate::scalar::Field;
use crate::tuple::MatrixTuple;

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
        impl FromStr for $t {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                let t = s.trim();
                Self::ALL
                    .iter()
                    .copied()
                    .find(|x| x.name() == t)
                    .ok_or_else(|| Error::InvalidLabel(t.to_string()))
            }
        }
    };
}

/// An orbit of `G = GL3 × H`, `H = {(1 0; λ μ)}`, named by its representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GLabel {
    A01,
    A0Inf,
    AInf0,
    B01,
    B00,
    BInf0,
    BInf1,
    C,
    D,
    E0,
    EInf,
    O,
}

impl GLabel {
    pub const ALL: [GLabel; 12] = [
        GLabel::A01,
        GLabel::A0Inf,
        GLabel::AInf0,
        GLabel::B01,
        GLabel::B00,
        GLabel::BInf0,
        GLabel::BInf1,
        GLabel::C,
        GLabel::D,
        GLabel::E0,
        GLabel::EInf,
        GLabel::O,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GLabel::A01 => "A[0,1]",
            GLabel::A0Inf => "A[0,inf]",
            GLabel::AInf0 => "A[inf,0]",
            GLabel::B01 => "B[0,1]",
            GLabel::B00 => "B[0,0]",
            GLabel::BInf0 => "B[inf,0]",
            GLabel::BInf1 => "B[inf,1]",
            GLabel::C => "C",
            GLabel::D => "D",
            GLabel::E0 => "E[0]",
            GLabel::EInf => "E[inf]",
            GLabel::O => "O",
        }
    }

    pub fn representative(self) -> OrbitLabel {
        self.name().parse().expect("built-in label")
    }
}

string_serde!(GLabel);

/// An orbit of `GL3 × GL2`, named by its representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GL32Label {
    A01,
    B01,
    B00,
    C,
    D,
    E0,
    O,
}

impl GL32Label {
    pub const ALL: [GL32Label; 7] = [
        GL32Label::A01,
        GL32Label::B01,
        GL32Label::B00,
        GL32Label::C,
        GL32Label::D,
        GL32Label::E0,
        GL32Label::O,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GL32Label::A01 => "A[0,1]",
            GL32Label::B01 => "B[0,1]",
            GL32Label::B00 => "B[0,0]",
            GL32Label::C => "C",
            GL32Label::D => "D",
            GL32Label::E0 => "E[0]",
            GL32Label::O => "O",
        }
    }

    pub fn representative(self) -> OrbitLabel {
        self.name().parse().expect("built-in label")
    }
}

string_serde!(GL32Label);

/// A Hesselink stratum of the nullcone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stratum {
    Beta1,
    Beta2,
    Beta3,
    Beta4,
    Beta5,
}

impl Stratum {
    pub const ALL: [Stratum; 5] = [
        Stratum::Beta1,
        Stratum::Beta2,
        Stratum::Beta3,
        Stratum::Beta4,
        Stratum::Beta5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stratum::Beta1 => "beta1",
            Stratum::Beta2 => "beta2",
            Stratum::Beta3 => "beta3",
            Stratum::Beta4 => "beta4",
            Stratum::Beta5 => "beta5",
        }
    }

    /// The vector `β`, stored as printed and treated as an identifier.
    pub fn beta(self) -> [BigRational; 3] {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        match self {
            Stratum::Beta1 => [q(-1, 1), q(0, 1), q(1, 1)],
            Stratum::Beta2 => [q(-2, 3), q(1, 3), q(1, 3)],
            Stratum::Beta3 => [q(-1, 3), q(-1, 3), q(2, 3)],
            Stratum::Beta4 => [q(-1, 2), q(0, 1), q(1, 2)],
            Stratum::Beta5 => [q(0, 1), q(0, 1), q(0, 1)],
        }
    }

    /// Dimension of the stratum: the largest orbit dimension plus the number
    /// of continuous parameters among the families it contains.
    pub fn dimension(self) -> usize {
        match self {
            Stratum::Beta1 => 9,
            Stratum::Beta2 | Stratum::Beta3 => 6,
            Stratum::Beta4 => 5,
            Stratum::Beta5 => 0,
        }
    }
}

string_serde!(Stratum);

fn fin_is_zero(p: &ExtParam) -> bool {
    p.finite().is_some_and(|s| s.is_zero())
}

/// The `G`-orbit containing the class `l`.
pub fn classify_g(l: &OrbitLabel) -> Result<GLabel> {
    l.validate()?;
    Ok(match l {
        OrbitLabel::A(p, q) if !p.is_inf() && !q.is_inf() => GLabel::A01,
        OrbitLabel::A(_, q) if q.is_inf() => GLabel::A0Inf,
        OrbitLabel::A(..) => GLabel::AInf0,
        OrbitLabel::B(p, q) => match (p.is_inf(), fin_is_zero(q)) {
            (false, false) => GLabel::B01,
            (false, true) => GLabel::B00,
            (true, true) => GLabel::BInf0,
            (true, false) => GLabel::BInf1,
        },
        OrbitLabel::C => GLabel::C,
        OrbitLabel::D => GLabel::D,
        OrbitLabel::E(p) if p.is_inf() => GLabel::EInf,
        OrbitLabel::E(_) => GLabel::E0,
        OrbitLabel::O => GLabel::O,
    })
}

/// The `GL3 × GL2`-orbit containing the class `l`.
pub fn classify_gl32(l: &OrbitLabel) -> Result<GL32Label> {
    Ok(match classify_g(l)? {
        GLabel::A01 | GLabel::A0Inf | GLabel::AInf0 => GL32Label::A01,
        GLabel::B01 | GLabel::BInf1 => GL32Label::B01,
        GLabel::B00 | GLabel::BInf0 => GL32Label::B00,
        GLabel::C => GL32Label::C,
        GLabel::D => GL32Label::D,
        GLabel::E0 | GLabel::EInf => GL32Label::E0,
        GLabel::O => GL32Label::O,
    })
}

/// The Hesselink stratum containing the class `l`; it depends only on the
/// letter.
pub fn hesselink_stratum(l: &OrbitLabel) -> Result<Stratum> {
    l.validate()?;
    Ok(match l {
        OrbitLabel::A(..) | OrbitLabel::B(..) => Stratum::Beta1,
        OrbitLabel::C => Stratum::Beta2,
        OrbitLabel::D => Stratum::Beta3,
        OrbitLabel::E(_) => Stratum::Beta4,
        OrbitLabel::O => Stratum::Beta5,
    })
}

fn names<T: Copy>(all: &[T], name: fn(T) -> &'static str) -> Vec<&'static str> {
    all.iter().map(|&x| name(x)).collect()
}

pub fn g_hasse() -> Hasse {
    Hasse::new(
        "degenerations of GL3 x H-orbits",
        &names(&GLabel::ALL, GLabel::name),
        &[
            ("A[0,1]", "A[0,inf]"),
            ("A[0,1]", "A[inf,0]"),
            ("A[0,1]", "B[0,1]"),
            ("B[0,1]", "B[0,0]"),
            ("B[0,1]", "B[inf,1]"),
            ("A[0,inf]", "B[inf,1]"),
            ("A[inf,0]", "B[inf,1]"),
            ("B[inf,1]", "C"),
            ("B[inf,1]", "D"),
            ("B[inf,1]", "B[inf,0]"),
            ("B[0,0]", "B[inf,0]"),
            ("B[0,0]", "E[0]"),
            ("B[inf,0]", "E[inf]"),
            ("C", "E[0]"),
            ("D", "E[0]"),
            ("E[0]", "E[inf]"),
            ("E[inf]", "O"),
        ],
    )
}

pub fn gl32_hasse() -> Hasse {
    Hasse::new(
        "degenerations of GL3 x GL2-orbits",
        &names(&GL32Label::ALL, GL32Label::name),
        &[
            ("A[0,1]", "B[0,1]"),
            ("B[0,1]", "B[0,0]"),
            ("B[0,1]", "C"),
            ("B[0,1]", "D"),
            ("B[0,0]", "E[0]"),
            ("C", "E[0]"),
            ("D", "E[0]"),
            ("E[0]", "O"),
        ],
    )
}

pub fn stratum_hasse() -> Hasse {
    Hasse::new(
        "degeneration order on the Hesselink strata",
        &names(&Stratum::ALL, Stratum::name),
        &[
            ("beta1", "beta2"),
            ("beta1", "beta3"),
            ("beta2", "beta4"),
            ("beta3", "beta4"),
            ("beta4", "beta5"),
        ],
    )
}

pub fn deg_le_g(a: GLabel, b: GLabel) -> bool {
    g_hasse().le(a as usize, b as usize)
}

pub fn deg_le_gl32(a: GL32Label, b: GL32Label) -> bool {
    gl32_hasse().le(a as usize, b as usize)
}

pub fn stratum_le(a: Stratum, b: Stratum) -> bool {
    stratum_hasse().le(a as usize, b as usize)
}

/// Rank of the tangent vectors `[X, A]` for `X` in a basis of `gl3`, together
/// with `extra` tangent vectors from a group acting on the tuple index.
fn tangent_rank(a: &MatrixTuple, extra: &[MatrixTuple]) -> Result<usize> {
    let (n, f) = (a.n(), a.field());
    let mut vectors = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let x = Matrix::unit(f, n, i, j);
            let v: Vec<_> = a
                .components()
                .iter()
                .flat_map(|c| (&(&x * c) - &(c * &x)).entries().to_vec())
                .collect();
            vectors.push(v);
        }
    }
    for t in extra {
        vectors.push(t.components().iter().flat_map(|c| c.entries().to_vec()).collect());
    }
    Ok(Matrix::from_columns(f, &vectors)?.rank())
}

fn require_pair(a: &MatrixTuple) -> Result<()> {
    if a.m() != 2 {
        return Err(Error::ShapeMismatch(format!(
            "expected a pair, got {} components",
            a.m()
        )));
    }
    Ok(())
}

/// Dimension of the `G`-orbit of a pair: the rank of the infinitesimal action
/// of `gl3 ⊕ Lie(H)`, where `Lie(H)` moves `(A1, A2)` along `(0, A1)` and
/// `(0, A2)`.
pub fn g_orbit_dim(a: &MatrixTuple) -> Result<usize> {
    require_pair(a)?;
    let z = Matrix::zeros(a.field(), a.n(), a.n());
    let (a1, a2) = (a.component(0).clone(), a.component(1).clone());
    tangent_rank(a, &[MatrixTuple::pair(z.clone(), a1)?, MatrixTuple::pair(z, a2)?])
}

/// Dimension of the `GL3 × GL2`-orbit of a pair.
pub fn gl32_orbit_dim(a: &MatrixTuple) -> Result<usize> {
    require_pair(a)?;
    let z = Matrix::zeros(a.field(), a.n(), a.n());
    let (a1, a2) = (a.component(0).clone(), a.component(1).clone());
    tangent_rank(
        a,
        &[
            MatrixTuple::pair(a1.clone(), z.clone())?,
            MatrixTuple::pair(a2.clone(), z.clone())?,
            MatrixTuple::pair(z.clone(), a1)?,
            MatrixTuple::pair(z, a2)?,
        ],
    )
}

impl GLabel {
    pub fn dimension(self) -> Result<usize> {
        g_orbit_dim(&representative(&self.representative(), Field::Rational)?)
    }
}

impl GL32Label {
    pub fn dimension(self) -> Result<usize> {
        gl32_orbit_dim(&representative(&self.representative(), Field::Rational)?)
    }
}

/// Dimension of the `GL3`-orbit of the representative of `l`.
pub fn label_orbit_dim(l: &OrbitLabel) -> Result<usize> {
    orbit_dim(&representative(l, Field::Rational)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_pair;

    #[test]
    fn classify_g_examples() {
        assert_eq!(classify_g(&OrbitLabel::a_inf(5)).unwrap(), GLabel::A0Inf);
        assert_eq!(classify_g(&OrbitLabel::b(3, 0)).unwrap(), GLabel::B00);
        assert_eq!(classify_g(&OrbitLabel::O).unwrap(), GLabel::O);
        assert_eq!(classify_g(&OrbitLabel::inf_b(0)).unwrap(), GLabel::BInf0);
        assert_eq!(classify_g(&OrbitLabel::inf_b(-2)).unwrap(), GLabel::BInf1);
        assert!(classify_g(&OrbitLabel::a(1, 0)).is_err());
    }

    #[test]
    fn classify_gl32_examples() {
        assert_eq!(classify_gl32(&OrbitLabel::inf_a(2)).unwrap(), GL32Label::A01);
        assert_eq!(classify_gl32(&OrbitLabel::e_inf()).unwrap(), GL32Label::E0);
        assert_eq!(classify_gl32(&OrbitLabel::inf_b(0)).unwrap(), GL32Label::B00);
    }

    #[test]
    fn order_examples() {
        assert!(deg_le_g(GLabel::A01, GLabel::EInf));
        assert!(!deg_le_g(GLabel::B00, GLabel::C));
        assert!(deg_le_g(GLabel::C, GLabel::C));
        assert!(deg_le_gl32(GL32Label::B01, GL32Label::C));
        assert!(!deg_le_gl32(GL32Label::B00, GL32Label::D));
        assert!(!deg_le_gl32(GL32Label::O, GL32Label::E0));
        assert!(stratum_le(Stratum::Beta1, Stratum::Beta4));
        assert!(!stratum_le(Stratum::Beta2, Stratum::Beta3));
        assert!(stratum_le(Stratum::Beta5, Stratum::Beta5));
    }

    #[test]
    fn strata_examples() {
        let d = hesselink_stratum(&OrbitLabel::D).unwrap();
        assert_eq!(d, Stratum::Beta3);
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(
            d.beta(),
            [
                -third.clone(),
                -third.clone(),
                third.clone() * BigRational::from_integer(2.into())
            ]
        );
        assert_eq!(hesselink_stratum(&OrbitLabel::O).unwrap(), Stratum::Beta5);
        assert_eq!(hesselink_stratum(&OrbitLabel::inf_b(1)).unwrap(), Stratum::Beta1);
    }

    #[test]
    fn margin_dimensions() {
        use GLabel::*;
        let expect = [
            (A01, 9),
            (A0Inf, 8),
            (AInf0, 8),
            (B01, 8),
            (B00, 7),
            (BInf1, 7),
            (C, 6),
            (D, 6),
            (BInf0, 6),
            (E0, 5),
            (EInf, 4),
            (O, 0),
        ];
        for (g, d) in expect {
            assert_eq!(g.dimension().unwrap(), d, "{g}");
        }
        let expect = [
            (GL32Label::A01, 9),
            (GL32Label::B01, 8),
            (GL32Label::B00, 7),
            (GL32Label::C, 6),
            (GL32Label::D, 6),
            (GL32Label::E0, 5),
            (GL32Label::O, 0),
        ];
        for (g, d) in expect {
            assert_eq!(g.dimension().unwrap(), d, "{g}");
        }
    }

    #[test]
    fn h_moves_a01_through_its_family() {
        let rep = representative(&OrbitLabel::a(0, 1), Field::Rational).unwrap();
        for (l, m) in [(2, 3), (-1, 1), (0, -2)] {
            let h = Matrix::from_ints(&[[1, 0], [l, m]]);
            let moved = rep.apply_gl2(&h).unwrap();
            assert_eq!(moved, representative(&OrbitLabel::a(l, m), Field::Rational).unwrap());
            assert_eq!(classify_g(&classify_pair(&moved).unwrap()).unwrap(), GLabel::A01);
        }
        let swap = Matrix::from_ints(&[[0, 1], [1, 0]]);
        let e = |i, j| Matrix::unit(Field::Rational, 3, i, j);
        let pair = MatrixTuple::pair(e(2, 1), e(3, 2)).unwrap();
        assert_eq!(
            pair.apply_gl2(&swap).unwrap(),
            MatrixTuple::pair(e(3, 2), e(2, 1)).unwrap()
        );
    }

    #[test]
    fn names_round_trip() {
        for g in GLabel::ALL {
            assert_eq!(g.to_string().parse::<GLabel>().unwrap(), g);
            assert_eq!(classify_g(&g.representative()).unwrap(), g);
        }
        for g in GL32Label::ALL {
            assert_eq!(classify_gl32(&g.representative()).unwrap(), g);
        }
        assert_eq!(serde_json::to_string(&Stratum::Beta2).unwrap(), "\"beta2\"");
    }
}
