//! Transcribed Q, R and P formula tables.

use serde::{Deserialize, Serialize};

use super::profile::ProfileKind;
use crate::error::{Error, Result};
use crate::hermitian::{e, Hermitian3};

/// Diagonal slot shapes used to write the Q table compactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    T,
    H,
    C,
    /// `±λ`, sign chosen per entry variant (shared by all `S` slots of one Q).
    S,
    Plus,
    Minus,
    Rec,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QForm {
    Tan,
    H1,
    H2,
    H3,
    H4,
    H5,
    H6,
    H7,
    H8,
    H9,
    H10,
    H11,
    R1,
    R2,
    R3,
}

pub const ALL_Q_FORMS: [QForm; 15] = [
    QForm::Tan,
    QForm::H1,
    QForm::H2,
    QForm::H3,
    QForm::H4,
    QForm::H5,
    QForm::H6,
    QForm::H7,
    QForm::H8,
    QForm::H9,
    QForm::H10,
    QForm::H11,
    QForm::R1,
    QForm::R2,
    QForm::R3,
];

impl QForm {
    pub(crate) fn slots(self) -> [Slot; 3] {
        use Slot::*;
        match self {
            QForm::Tan => [T, T, T],
            QForm::H1 => [H, H, H],
            QForm::H2 => [C, C, C],
            QForm::H3 => [H, H, C],
            QForm::H4 => [C, C, H],
            QForm::H5 => [H, H, S],
            QForm::H6 => [C, C, S],
            QForm::H7 => [S, H, C],
            QForm::H8 => [S, S, H],
            QForm::H9 => [S, S, C],
            QForm::H10 => [Plus, Minus, H],
            QForm::H11 => [Plus, Minus, C],
            QForm::R1 => [Rec, Rec, Rec],
            QForm::R2 => [Rec, Rec, Zero],
            QForm::R3 => [Zero, Zero, Rec],
        }
    }

    /// Whether the form carries a free `±λ` sign.
    pub fn has_sign(self) -> bool {
        self.slots().contains(&Slot::S)
    }

    pub fn short(self) -> &'static str {
        match self {
            QForm::Tan => "tan",
            QForm::H1 => "h1",
            QForm::H2 => "h2",
            QForm::H3 => "h3",
            QForm::H4 => "h4",
            QForm::H5 => "h5",
            QForm::H6 => "h6",
            QForm::H7 => "h7",
            QForm::H8 => "h8",
            QForm::H9 => "h9",
            QForm::H10 => "h10",
            QForm::H11 => "h11",
            QForm::R1 => "r1",
            QForm::R2 => "r2",
            QForm::R3 => "r3",
        }
    }

    pub fn id(self) -> String {
        format!("Q.{}", self.short())
    }

    pub fn from_short(s: &str) -> Option<QForm> {
        ALL_Q_FORMS.into_iter().find(|q| q.short() == s)
    }

    /// Profile kinds for a given sign of the `±λ` slots (ignored when there are none).
    pub fn kinds(self, sign: i8) -> [ProfileKind; 3] {
        self.slots().map(|s| match s {
            Slot::T => ProfileKind::Tan,
            Slot::H => ProfileKind::NegTanh,
            Slot::C => ProfileKind::NegCoth,
            Slot::S if sign >= 0 => ProfileKind::ConstPlus,
            Slot::S | Slot::Minus => ProfileKind::ConstMinus,
            Slot::Plus => ProfileKind::ConstPlus,
            Slot::Rec => ProfileKind::NegReciprocal,
            Slot::Zero => ProfileKind::Zero,
        })
    }

    /// Human-readable diagonal, e.g. `diag(−λtanh(λx+γ₁), −λtanh(λx+γ₂), ±λ)`.
    pub fn formula(self) -> String {
        let parts: Vec<String> = self
            .slots()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let g = SUB[i + 1];
                match s {
                    Slot::T => format!("λtan(λx+γ{g})"),
                    Slot::H => format!("−λtanh(λx+γ{g})"),
                    Slot::C => format!("−λcoth(λx+γ{g})"),
                    Slot::S => "±λ".into(),
                    Slot::Plus => "λ".into(),
                    Slot::Minus => "−λ".into(),
                    Slot::Rec => format!("−1/(x+γ{g})"),
                    Slot::Zero => "0".into(),
                }
            })
            .collect();
        format!("diag({})", parts.join(", "))
    }
}

const SUB: [&str; 9] = ["₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RForm {
    R11,
    R12,
    R13,
    R14,
    R15,
    R16,
    R21,
    R22,
}

pub const ALL_R_FORMS: [RForm; 8] = [
    RForm::R11,
    RForm::R12,
    RForm::R13,
    RForm::R14,
    RForm::R15,
    RForm::R16,
    RForm::R21,
    RForm::R22,
];

impl RForm {
    pub fn number(self) -> &'static str {
        match self {
            RForm::R11 => "11",
            RForm::R12 => "12",
            RForm::R13 => "13",
            RForm::R14 => "14",
            RForm::R15 => "15",
            RForm::R16 => "16",
            RForm::R21 => "21",
            RForm::R22 => "22",
        }
    }

    pub fn id(self) -> String {
        format!("R.{}", self.number())
    }

    pub fn from_number(s: &str) -> Option<RForm> {
        ALL_R_FORMS.into_iter().find(|r| r.number() == s)
    }

    /// Number of independent `±` selectors.
    pub fn sign_count(self) -> usize {
        if self == RForm::R21 {
            2
        } else {
            1
        }
    }

    /// Whether the form is parametrized by `(r, ε)` with `r² + ε² = ω²`.
    pub fn uses_r_eps(self) -> bool {
        matches!(self, RForm::R12 | RForm::R14 | RForm::R16 | RForm::R22)
    }

    pub fn formula(self) -> &'static str {
        match self {
            RForm::R11 => "±ω(e₃+e₈)",
            RForm::R12 => "εe₂+re₃±ωe₈",
            RForm::R13 => "±ω(e₃−e₈)",
            RForm::R14 | RForm::R22 => "½(r±ω)e₀+½(r∓ω)e₃+εe₅−½(3r±ω)e₈",
            RForm::R15 => "±ω(e₀−2e₈)",
            RForm::R16 => "½(r±ω)e₀−½(r∓ω)e₃+εe₇−½(3r±ω)e₈",
            RForm::R21 => "±ω(e₁±e₈), signs independent",
        }
    }

    /// Builds the constant matrix. `signs` must have [`RForm::sign_count`] entries of ±1.
    pub fn build(self, omega: f64, r: f64, eps: f64, signs: &[i8]) -> Result<Hermitian3> {
        if signs.len() != self.sign_count() || signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::Argument(format!(
                "{} takes {} sign(s) of ±1, got {signs:?}",
                self.id(),
                self.sign_count()
            )));
        }
        let s = f64::from(signs[0]);
        let so = s * omega;
        Ok(match self {
            RForm::R11 => (e(3) + e(8)).scale(so),
            RForm::R12 => eps * e(2) + r * e(3) + so * e(8),
            RForm::R13 => (e(3) - e(8)).scale(so),
            RForm::R14 | RForm::R22 => {
                0.5 * (r + so) * e(0) + 0.5 * (r - so) * e(3) + eps * e(5)
                    - 0.5 * (3.0 * r + so) * e(8)
            }
            RForm::R15 => (e(0) - 2.0 * e(8)).scale(so),
            RForm::R16 => {
                0.5 * (r + so) * e(0) - 0.5 * (r - so) * e(3) + eps * e(7)
                    - 0.5 * (3.0 * r + so) * e(8)
            }
            RForm::R21 => (e(1) + f64::from(signs[1]) * e(8)).scale(so),
        })
    }
}

/// How the three integration constants are tied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GammaPattern {
    AllDistinct,
    FirstTwoEqual,
}

impl GammaPattern {
    pub fn tag(self) -> &'static str {
        match self {
            GammaPattern::AllDistinct => "ddd",
            GammaPattern::FirstTwoEqual => "eed",
        }
    }
}

/// Scalar factor of a P envelope; slot indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Fac {
    Sec(usize),
    Sech(usize),
    Csch(usize),
    Inv(usize),
    /// `exp(±λx)` with the sign of the Q form's `±λ` slots.
    ExpQ,
    ExpPlus,
    ExpMinus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Env {
    Sq(&'static [Fac]),
    Lin(&'static [Fac]),
    One,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Coef {
    Phi,
    P,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mat {
    E(usize),
    /// `e₄ ∓ e₆`, with the sign opposite to the e₈ sign of R21.
    E4E6,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct TermSpec {
    pub coef: Coef,
    pub mat: Mat,
    pub env: Env,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct PFormula {
    pub terms: &'static [TermSpec],
    /// Only the `+λ` variant of the Q form is listed.
    pub plus_only: bool,
}

pub(crate) struct PBlock {
    pub number: usize,
    pub r_form: RForm,
    pub pattern: GammaPattern,
    pub q_forms: &'static [QForm],
    pub formulas: &'static [PFormula],
}

use Coef::{Phi, P};
use Env::{Lin, One, Sq};
use Fac::*;

const fn t(coef: Coef, mat: Mat, env: Env) -> TermSpec {
    TermSpec { coef, mat, env }
}

const fn f(terms: &'static [TermSpec]) -> PFormula {
    PFormula {
        terms,
        plus_only: false,
    }
}

const fn f_plus(terms: &'static [TermSpec]) -> PFormula {
    PFormula {
        terms,
        plus_only: true,
    }
}

const E1: Mat = Mat::E(1);
const E3: Mat = Mat::E(3);
const E4: Mat = Mat::E(4);
const E6: Mat = Mat::E(6);

const Q_DISTINCT: &[QForm] = &[
    QForm::Tan,
    QForm::H1,
    QForm::H2,
    QForm::H3,
    QForm::H4,
    QForm::H5,
    QForm::H6,
    QForm::H7,
    QForm::H10,
    QForm::H11,
    QForm::R1,
    QForm::R2,
];
const Q_MIXED_CONST: &[QForm] = &[QForm::H7, QForm::H10, QForm::H11];
const Q_BLOCK4: &[QForm] = &[
    QForm::H3,
    QForm::H4,
    QForm::H5,
    QForm::H6,
    QForm::H7,
    QForm::H10,
    QForm::H11,
    QForm::R2,
];
const Q_EQUAL: &[QForm] = &[
    QForm::Tan,
    QForm::H1,
    QForm::H2,
    QForm::H3,
    QForm::H4,
    QForm::H5,
    QForm::H6,
    QForm::H8,
    QForm::H9,
    QForm::R1,
    QForm::R2,
    QForm::R3,
];

const B1: &[PFormula] = &[
    f(&[t(Phi, E1, Sq(&[Sec(1), Sec(2)])), t(P, E6, Sq(&[Sec(2), Sec(3)]))]),
    f(&[t(Phi, E1, Sq(&[Sech(1), Sech(2)])), t(P, E6, Sq(&[Sech(2), Sech(3)]))]),
    f(&[t(Phi, E1, Sq(&[Csch(1), Csch(2)])), t(P, E6, Sq(&[Csch(2), Csch(3)]))]),
    f(&[t(Phi, E1, Sq(&[Sech(1), Sech(2)])), t(P, E6, Sq(&[Sech(2), Csch(3)]))]),
    f(&[t(Phi, E1, Sq(&[Csch(1), Csch(2)])), t(P, E6, Sq(&[Csch(2), Sech(3)]))]),
    f(&[t(Phi, E1, Sq(&[Sech(1), Sech(2)])), t(P, E6, Sq(&[Sech(2), ExpQ]))]),
    f(&[t(Phi, E1, Sq(&[Csch(1), Csch(2)])), t(P, E6, Sq(&[Csch(2), ExpQ]))]),
    f(&[t(Phi, E1, Sq(&[ExpQ, Sech(2)])), t(P, E6, Sq(&[Sech(2), Csch(3)]))]),
    f(&[t(Phi, E1, One), t(P, E6, Sq(&[ExpMinus, Sech(3)]))]),
    f(&[t(Phi, E1, One), t(P, E6, Sq(&[ExpMinus, Csch(3)]))]),
    f(&[t(Phi, E1, Sq(&[Inv(1), Inv(2)])), t(P, E6, Sq(&[Inv(2), Inv(3)]))]),
    f(&[t(Phi, E1, Sq(&[Inv(1), Inv(2)])), t(P, E6, Sq(&[Inv(2)]))]),
];

const B2: &[PFormula] = &[
    f(&[t(P, E1, Sq(&[Sec(1), Sec(2)]))]),
    f(&[t(P, E1, Sq(&[Sech(1), Sech(2)]))]),
    f(&[t(P, E1, Sq(&[Csch(1), Csch(2)]))]),
    f(&[t(P, E1, Sq(&[Sech(1), Sech(2)]))]),
    f(&[t(P, E1, Sq(&[Csch(1), Csch(2)]))]),
    f(&[t(P, E1, Sq(&[Sech(1), Sech(2)]))]),
    f(&[t(P, E1, Sq(&[Csch(1), Csch(2)]))]),
    f(&[t(P, E1, Sq(&[ExpQ, Sech(2)]))]),
    f(&[t(P, E1, One)]),
    f(&[t(P, E1, One)]),
    f(&[t(P, E1, Sq(&[Inv(1), Inv(2)]))]),
    f(&[t(P, E1, Sq(&[Inv(1), Inv(2)]))]),
];

const B3: &[PFormula] = &[
    f(&[t(Phi, E1, Sq(&[ExpQ, Sech(2)])), t(P, E4, Sq(&[ExpQ, Csch(3)]))]),
    f(&[t(Phi, E1, One), t(P, E4, Sq(&[ExpPlus, Sech(3)]))]),
    f(&[t(Phi, E1, One), t(P, E4, Sq(&[ExpPlus, Csch(3)]))]),
];

const B4: &[PFormula] = &[
    f(&[t(P, E4, Sq(&[Sech(1), Csch(3)]))]),
    f(&[t(P, E4, Sq(&[Csch(1), Sech(3)]))]),
    f(&[t(P, E4, Sq(&[Sech(1), ExpQ]))]),
    f_plus(&[t(P, E4, Sq(&[Csch(1), ExpQ]))]),
    f(&[t(P, E4, Sq(&[ExpQ, Csch(3)]))]),
    f(&[t(P, E4, Sq(&[ExpPlus, Sech(3)]))]),
    f(&[t(P, E4, Sq(&[ExpPlus, Csch(3)]))]),
    f(&[t(P, E4, Sq(&[Inv(1)]))]),
];

const B5: &[PFormula] = &[
    f(&[t(Phi, E4, Sq(&[Sech(1), Csch(3)])), t(P, E6, Sq(&[Sech(2), Csch(3)]))]),
    f(&[t(Phi, E4, Sq(&[Csch(1), Sech(3)])), t(P, E6, Sq(&[Csch(2), Sech(3)]))]),
    f(&[t(Phi, E4, Sq(&[Sech(1), ExpQ])), t(P, E6, Sq(&[Sech(2), ExpQ]))]),
    f_plus(&[t(Phi, E4, Sq(&[Csch(1), ExpQ])), t(P, E6, Sq(&[Csch(2), ExpQ]))]),
    f(&[t(Phi, E4, Sq(&[ExpQ, Csch(3)])), t(P, E6, Sq(&[Sech(2), Csch(3)]))]),
    f(&[t(Phi, E4, Sq(&[ExpPlus, Sech(3)])), t(P, E6, Sq(&[ExpMinus, Sech(3)]))]),
    f(&[t(Phi, E4, Sq(&[ExpPlus, Csch(3)])), t(P, E6, Sq(&[ExpMinus, Csch(3)]))]),
    f(&[t(Phi, E4, Sq(&[Inv(1)])), t(P, E6, Sq(&[Inv(2)]))]),
];

const B6: &[PFormula] = &[
    f(&[t(P, E6, Sq(&[Sech(2), Csch(3)]))]),
    f(&[t(P, E6, Sq(&[ExpMinus, Sech(3)]))]),
    f(&[t(P, E6, Sq(&[ExpMinus, Csch(3)]))]),
];

const B7: &[PFormula] = &[
    f(&[t(P, E3, Lin(&[Sec(1)])), t(Phi, Mat::E4E6, Sq(&[Sec(1), Sec(3)]))]),
    f(&[t(P, E3, Lin(&[Sech(1)])), t(Phi, Mat::E4E6, Sq(&[Sech(1), Sech(3)]))]),
    f(&[t(P, E3, Lin(&[Csch(1)])), t(Phi, Mat::E4E6, Sq(&[Csch(1), Csch(3)]))]),
    f(&[t(P, E3, Lin(&[Sech(1)])), t(Phi, Mat::E4E6, Sq(&[Sech(1), Csch(3)]))]),
    f(&[t(P, E3, Lin(&[Csch(1)])), t(Phi, Mat::E4E6, Sq(&[Csch(1), Sech(3)]))]),
    f(&[t(P, E3, Lin(&[Sech(1)])), t(Phi, Mat::E4E6, Sq(&[Sech(1), ExpQ]))]),
    f(&[t(P, E3, Lin(&[Csch(1)])), t(Phi, Mat::E4E6, Sq(&[Csch(1), ExpQ]))]),
    f(&[t(P, E3, Lin(&[ExpQ])), t(Phi, Mat::E4E6, Sq(&[ExpQ, Sech(3)]))]),
    f(&[t(P, E3, Lin(&[ExpQ])), t(Phi, Mat::E4E6, Sq(&[ExpQ, Csch(3)]))]),
    f(&[t(P, E3, Lin(&[Inv(1)])), t(Phi, Mat::E4E6, Sq(&[Inv(1), Inv(3)]))]),
    f(&[t(P, E3, Lin(&[Inv(1)])), t(Phi, Mat::E4E6, Sq(&[Inv(1)]))]),
    f(&[t(P, E3, One), t(Phi, Mat::E4E6, Sq(&[Inv(3)]))]),
];

const B8: &[PFormula] = &[
    f(&[t(P, E4, Sq(&[Sec(1), Sec(3)]))]),
    f(&[t(P, E4, Sq(&[Sech(1), Sech(3)]))]),
    f(&[t(P, E4, Sq(&[Csch(1), Csch(3)]))]),
    f(&[t(P, E4, Sq(&[Sech(1), Csch(3)]))]),
    f(&[t(P, E4, Sq(&[Csch(1), Sech(3)]))]),
    f(&[t(P, E4, Sq(&[Sech(1), ExpQ]))]),
    f(&[t(P, E4, Sq(&[Csch(1), ExpQ]))]),
    f(&[t(P, E4, Sq(&[ExpQ, Sech(3)]))]),
    f(&[t(P, E4, Sq(&[ExpQ, Csch(3)]))]),
    f(&[t(P, E4, Sq(&[Inv(1), Inv(3)]))]),
    f(&[t(P, E4, Sq(&[Inv(1)]))]),
    f(&[t(P, E4, Sq(&[Inv(3)]))]),
];

pub(crate) const P_BLOCKS: [PBlock; 8] = [
    PBlock {
        number: 1,
        r_form: RForm::R11,
        pattern: GammaPattern::AllDistinct,
        q_forms: Q_DISTINCT,
        formulas: B1,
    },
    PBlock {
        number: 2,
        r_form: RForm::R12,
        pattern: GammaPattern::AllDistinct,
        q_forms: Q_DISTINCT,
        formulas: B2,
    },
    PBlock {
        number: 3,
        r_form: RForm::R13,
        pattern: GammaPattern::AllDistinct,
        q_forms: Q_MIXED_CONST,
        formulas: B3,
    },
    PBlock {
        number: 4,
        r_form: RForm::R14,
        pattern: GammaPattern::AllDistinct,
        q_forms: Q_BLOCK4,
        formulas: B4,
    },
    PBlock {
        number: 5,
        r_form: RForm::R15,
        pattern: GammaPattern::AllDistinct,
        q_forms: Q_BLOCK4,
        formulas: B5,
    },
    PBlock {
        number: 6,
        r_form: RForm::R16,
        pattern: GammaPattern::AllDistinct,
        q_forms: Q_MIXED_CONST,
        formulas: B6,
    },
    PBlock {
        number: 7,
        r_form: RForm::R21,
        pattern: GammaPattern::FirstTwoEqual,
        q_forms: Q_EQUAL,
        formulas: B7,
    },
    PBlock {
        number: 8,
        r_form: RForm::R22,
        pattern: GammaPattern::FirstTwoEqual,
        q_forms: Q_EQUAL,
        formulas: B8,
    },
];

pub(crate) fn block(number: usize) -> Option<&'static PBlock> {
    P_BLOCKS.iter().find(|b| b.number == number)
}

fn fac_text(fac: Fac, q_sign: i8) -> String {
    match fac {
        Sec(i) => format!("sec(λx+γ{})", SUB[i]),
        Sech(i) => format!("sech(λx+γ{})", SUB[i]),
        Csch(i) => format!("csch(λx+γ{})", SUB[i]),
        Inv(i) => format!("1/(x+γ{})", SUB[i]),
        ExpQ if q_sign < 0 => "exp(−λx)".into(),
        ExpQ => "exp(λx)".into(),
        ExpPlus => "exp(λx)".into(),
        ExpMinus => "exp(−λx)".into(),
    }
}

/// Human-readable P formula for given Q and R21 e₈ signs.
pub(crate) fn p_text(formula: &PFormula, q_sign: i8, e8_sign: i8) -> String {
    let terms: Vec<String> = formula
        .terms
        .iter()
        .map(|term| {
            let c = match term.coef {
                Phi => "φ",
                P => "p",
            };
            let m = match term.mat {
                Mat::E(i) => format!("e{}", SUB[i]),
                Mat::E4E6 if e8_sign > 0 => "(e₄−e₆)".into(),
                Mat::E4E6 => "(e₄+e₆)".into(),
            };
            let env = match term.env {
                One => String::new(),
                Sq(fs) => format!(
                    "√({})",
                    fs.iter().map(|x| fac_text(*x, q_sign)).collect::<Vec<_>>().join("·")
                ),
                Lin(fs) => fs.iter().map(|x| fac_text(*x, q_sign)).collect::<Vec<_>>().join("·"),
            };
            if env.is_empty() {
                format!("{c}{m}")
            } else {
                format!("{c}{m}·{env}")
            }
        })
        .collect();
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::matmul;

    #[test]
    fn block_sizes() {
        let sizes: Vec<usize> = P_BLOCKS.iter().map(|b| b.formulas.len()).collect();
        assert_eq!(sizes, vec![12, 12, 3, 8, 8, 3, 12, 12]);
        for b in &P_BLOCKS {
            assert_eq!(b.q_forms.len(), b.formulas.len(), "block {}", b.number);
        }
    }

    #[test]
    fn r_examples() {
        let r11 = RForm::R11.build(1.0, 0.0, 0.0, &[1]).unwrap();
        assert_eq!(r11, Hermitian3::from_diagonal([1.0, -1.0, 1.0]));
        let r12 = RForm::R12.build(1.0, 0.6, 0.8, &[1]).unwrap();
        let want = Hermitian3::from_rows([
            [(0.6, 0.0), (0.0, -0.8), (0.0, 0.0)],
            [(0.0, 0.8), (-0.6, 0.0), (0.0, 0.0)],
            [(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
        ])
        .unwrap();
        assert!(r12.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn every_r_squares_to_omega_squared() {
        let omega = 1.7;
        let (r, eps) = (omega * 0.28, omega * (1.0f64 - 0.28 * 0.28).sqrt());
        for form in ALL_R_FORMS {
            let variants: Vec<Vec<i8>> = if form.sign_count() == 2 {
                vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]
            } else {
                vec![vec![1], vec![-1]]
            };
            for s in variants {
                let m = form.build(omega, r, eps, &s).unwrap();
                let sq = matmul(&m, &m);
                for i in 0..3 {
                    for j in 0..3 {
                        let want = if i == j { omega * omega } else { 0.0 };
                        assert!((sq[(i, j)].re - want).abs() < 1e-14 * 4.0, "{form:?} {s:?}");
                        assert!(sq[(i, j)].im.abs() < 1e-14 * 4.0);
                    }
                }
            }
        }
    }

    #[test]
    fn bad_sign_count_rejected() {
        assert!(RForm::R21.build(1.0, 0.0, 0.0, &[1]).is_err());
        assert!(RForm::R11.build(1.0, 0.0, 0.0, &[2]).is_err());
    }

    #[test]
    fn q_short_names_round_trip() {
        for q in ALL_Q_FORMS {
            assert_eq!(QForm::from_short(q.short()), Some(q));
        }
        assert_eq!(QForm::H5.kinds(-1)[2], ProfileKind::ConstMinus);
        assert_eq!(QForm::H10.kinds(1)[1], ProfileKind::ConstMinus);
    }
}
