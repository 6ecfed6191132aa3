use super::element::GwElement;
use super::field::{is_prime, poly, FieldOps, PrimeField, Rationals};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Environment variable overriding the trial-division bound used for square classes.
pub const SQUAREFREE_BOUND_ENV: &str = "MOTIVIC_PLUMB_SQUAREFREE_BOUND";
pub const DEFAULT_SQUAREFREE_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldTag {
    Rational,
    FiniteField {
        p: u64,
        e: u32,
    },
    RealClosed,
    ComplexClosed,
    #[default]
    Generic,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "rational"),
            FieldTag::FiniteField { p, e } if *e == 1 => write!(f, "finite {p}"),
            FieldTag::FiniteField { p, e } => write!(f, "finite {p} {e}"),
            FieldTag::RealClosed => write!(f, "real"),
            FieldTag::ComplexClosed => write!(f, "complex"),
            FieldTag::Generic => write!(f, "generic"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GwModelTag {
    ZEps,
    Rank,
    Signature,
    FiniteField,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum GwClassResult {
    ZEps { value: GwElement },
    Rank { rank: usize },
    Signature { signature: i64 },
    FiniteField { rank: usize, disc_nonsquare: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GwError {
    #[error("minimal polynomial is not separable over {base}")]
    NotSeparable { base: FieldTag },
    #[error("unit representative is not invertible modulo the minimal polynomial")]
    NotUnit,
    #[error("entry {entry} is not in the image of ℤ_ε: {diagnostic}")]
    NotInZEpsImage { entry: String, diagnostic: String },
    #[error("model {model:?} is not supported over {base}")]
    UnsupportedModel { model: GwModelTag, base: FieldTag },
    #[error("trace forms are only computed over ℚ and prime fields, not {base}")]
    UnsupportedBase { base: FieldTag },
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("form is degenerate or not diagonalizable by congruence")]
    Degenerate,
    #[error("diagonal form entries must be nonzero")]
    ZeroEntry,
}

/// A diagonalized symmetric bilinear form `⟨a₁, …, aₙ⟩` over a tagged base field.
///
/// Entries are rationals; over `F_p` they are integer representatives in `[1, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalForm {
    pub base: FieldTag,
    pub entries: Vec<BigRational>,
    pub provenance: String,
}

impl DiagonalForm {
    pub fn new(base: FieldTag, entries: Vec<BigRational>, provenance: impl Into<String>) -> Result<Self, GwError> {
        if entries.iter().any(|e| e.is_zero()) {
            return Err(GwError::ZeroEntry);
        }
        Ok(DiagonalForm { base, entries, provenance: provenance.into() })
    }

    pub fn from_ints(base: FieldTag, entries: &[i64]) -> Result<Self, GwError> {
        let entries = entries.iter().map(|&e| BigRational::from_integer(e.into())).collect();
        DiagonalForm::new(base, entries, "explicit")
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }
}

/// A separable extension `κ = k[t]/(f)` together with a unit `u ∈ κ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub base: FieldTag,
    /// Monic, coefficients from degree 0 upwards.
    #[serde(with = "crate::serde_int::vec")]
    pub minimal_polynomial: Vec<BigInt>,
    /// Representative of `u`, coefficients from degree 0 upwards.
    #[serde(with = "crate::serde_int::vec")]
    pub unit: Vec<BigInt>,
}

impl ExtensionSpec {
    pub fn new(base: FieldTag, minimal_polynomial: &[i64], unit: &[i64]) -> Self {
        ExtensionSpec {
            base,
            minimal_polynomial: minimal_polynomial.iter().map(|&c| c.into()).collect(),
            unit: unit.iter().map(|&c| c.into()).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.minimal_polynomial.len().saturating_sub(1)
    }

    /// The same extension with `u` replaced by `s·u`.
    pub fn scaled_unit(&self, s: i64) -> Self {
        let mut out = self.clone();
        for c in &mut out.unit {
            *c *= s;
        }
        out
    }

    fn check_shape(&self) -> Result<(), GwError> {
        let n = self.degree();
        if n == 0 {
            return Err(GwError::InvalidExtension("minimal polynomial must have degree ≥ 1".into()));
        }
        if !self.minimal_polynomial[n].is_one() {
            return Err(GwError::InvalidExtension("minimal polynomial must be monic".into()));
        }
        let mut u = self.unit.clone();
        while u.last().is_some_and(|c| c.is_zero()) {
            u.pop();
        }
        if u.len() > n {
            return Err(GwError::InvalidExtension("deg(u) must be < deg(f)".into()));
        }
        Ok(())
    }
}

/// Diagonalization of `(a, b) ↦ Tr_{κ/k}(u·a·b)` on `κ` as a `k`-vector space.
pub fn trace_form(ext: &ExtensionSpec) -> Result<DiagonalForm, GwError> {
    ext.check_shape()?;
    match &ext.base {
        FieldTag::Rational => {
            let gram = trace_gram(&Rationals, ext)?;
            let diag = diagonalize_symmetric(&Rationals, gram)?;
            DiagonalForm::new(ext.base.clone(), diag, provenance(ext))
        }
        FieldTag::FiniteField { p, e: 1 } => {
            if !is_prime(*p) {
                return Err(GwError::UnsupportedBase { base: ext.base.clone() });
            }
            let field = PrimeField { p: *p };
            let gram = trace_gram(&field, ext)?;
            let diag = diagonalize_symmetric(&field, gram)?;
            let entries = diag.iter().map(|v| field.to_rational(v)).collect();
            DiagonalForm::new(ext.base.clone(), entries, provenance(ext))
        }
        other => Err(GwError::UnsupportedBase { base: other.clone() }),
    }
}

fn provenance(ext: &ExtensionSpec) -> String {
    let fmt_poly = |p: &[BigInt]| p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    format!(
        "trace form of u=[{}] on k[t]/([{}]) over {}",
        fmt_poly(&ext.unit),
        fmt_poly(&ext.minimal_polynomial),
        ext.base
    )
}

type Mat<E> = Vec<Vec<E>>;

fn mat_mul<F: FieldOps>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&a[i][k], &b[k][j]))))
                .collect()
        })
        .collect()
}

fn identity<F: FieldOps>(f: &F, n: usize) -> Mat<F::Elem> {
    (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect()
}

/// Gram matrix `G[a][b] = Tr(u·tᵃ·tᵇ)`, each trace taken as `tr(u(C)·C^{a+b})`
/// for the companion matrix `C` of `f`.
fn trace_gram<F: FieldOps>(f: &F, ext: &ExtensionSpec) -> Result<Mat<F::Elem>, GwError> {
    let fpoly: Vec<F::Elem> = ext.minimal_polynomial.iter().map(|c| f.from_int(c)).collect();
    let upoly = poly::trim(f, ext.unit.iter().map(|c| f.from_int(c)).collect());
    let n = fpoly.len() - 1;

    let g = poly::gcd(f, &fpoly, &poly::derivative(f, &fpoly));
    if g.len() != 1 {
        return Err(GwError::NotSeparable { base: ext.base.clone() });
    }
    if upoly.is_empty() || poly::gcd(f, &fpoly, &upoly).len() != 1 {
        return Err(GwError::NotUnit);
    }

    // Column j holds t·t^j in the basis 1, t, …, t^{n-1}.
    let mut companion = vec![vec![f.zero(); n]; n];
    for j in 0..n {
        if j + 1 < n {
            companion[j + 1][j] = f.one();
        } else {
            for (i, row) in companion.iter_mut().enumerate() {
                row[j] = f.sub(&f.zero(), &fpoly[i]);
            }
        }
    }

    // u(C) by Horner.
    let mut u_of_c = vec![vec![f.zero(); n]; n];
    for coeff in upoly.iter().rev() {
        u_of_c = mat_mul(f, &u_of_c, &companion);
        for (i, row) in u_of_c.iter_mut().enumerate() {
            row[i] = f.add(&row[i], coeff);
        }
    }

    let mut traces = Vec::with_capacity(2 * n - 1);
    let mut power = identity(f, n);
    for _ in 0..(2 * n - 1) {
        let m = mat_mul(f, &u_of_c, &power);
        traces.push((0..n).fold(f.zero(), |acc, i| f.add(&acc, &m[i][i])));
        power = mat_mul(f, &companion, &power);
    }
    Ok((0..n).map(|a| (0..n).map(|b| traces[a + b].clone()).collect()).collect())
}

/// Congruence diagonalization of a symmetric matrix.
///
/// Pivot: first nonzero diagonal entry at or after the current index. If the
/// remaining diagonal vanishes, row/column `j` is added to `i` for the first
/// nonzero off-diagonal `g_ij`.
fn diagonalize_symmetric<F: FieldOps>(f: &F, mut g: Mat<F::Elem>) -> Result<Vec<F::Elem>, GwError> {
    let n = g.len();
    for i in 0..n {
        if f.is_zero(&g[i][i]) {
            if let Some(j) = (i + 1..n).find(|&j| !f.is_zero(&g[j][j])) {
                g.swap(i, j);
                for row in g.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !f.is_zero(&g[i][j])) {
                for k in 0..n {
                    let v = f.add(&g[i][k], &g[j][k]);
                    g[i][k] = v;
                }
                for row in g.iter_mut() {
                    let v = f.add(&row[i], &row[j]);
                    row[i] = v;
                }
                if f.is_zero(&g[i][i]) {
                    // characteristic 2 with an alternating block
                    return Err(GwError::Degenerate);
                }
            } else {
                return Err(GwError::Degenerate);
            }
        }
        let pivot = g[i][i].clone();
        for j in i + 1..n {
            if f.is_zero(&g[j][i]) {
                continue;
            }
            let c = f.div(&g[j][i], &pivot).expect("nonzero pivot");
            for k in 0..n {
                let v = f.sub(&g[j][k], &f.mul(&c, &g[i][k]));
                g[j][k] = v;
            }
            for row in g.iter_mut() {
                let v = f.sub(&row[j], &f.mul(&c, &row[i]));
                row[j] = v;
            }
        }
    }
    Ok((0..n).map(|i| g[i][i].clone()).collect())
}

/// Diagonalizes an explicit symmetric Gram matrix over `ℚ` or a prime field.
pub fn diagonalize_gram(base: FieldTag, gram: &[Vec<BigRational>]) -> Result<DiagonalForm, GwError> {
    match &base {
        FieldTag::Rational | FieldTag::Generic | FieldTag::RealClosed => {
            let diag = diagonalize_symmetric(&Rationals, gram.to_vec())?;
            DiagonalForm::new(base, diag, "explicit Gram matrix")
        }
        FieldTag::FiniteField { p, e: 1 } if is_prime(*p) => {
            let field = PrimeField { p: *p };
            let reduced = gram
                .iter()
                .map(|row| row.iter().map(|r| field.from_rational(r).ok_or(GwError::Degenerate)).collect())
                .collect::<Result<Vec<Vec<u64>>, _>>()?;
            let diag = diagonalize_symmetric(&field, reduced)?;
            let entries = diag.iter().map(|v| field.to_rational(v)).collect();
            DiagonalForm::new(base, entries, "explicit Gram matrix")
        }
        other => Err(GwError::UnsupportedBase { base: other.clone() }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Trial-division bound for square-free kernels over `ℚ`.
    pub squarefree_bound: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { squarefree_bound: DEFAULT_SQUAREFREE_BOUND }
    }
}

impl ClassifyOptions {
    /// Defaults, with the bound overridden by `MOTIVIC_PLUMB_SQUAREFREE_BOUND` when set.
    pub fn from_env() -> Self {
        let bound = std::env::var(SQUAREFREE_BOUND_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_SQUAREFREE_BOUND);
        ClassifyOptions { squarefree_bound: bound }
    }
}

pub fn classify(form: &DiagonalForm, model: GwModelTag) -> Result<GwClassResult, GwError> {
    classify_with(form, model, &ClassifyOptions::default())
}

pub fn classify_with(form: &DiagonalForm, model: GwModelTag, opts: &ClassifyOptions) -> Result<GwClassResult, GwError> {
    if form.entries.iter().any(|e| e.is_zero()) {
        return Err(GwError::ZeroEntry);
    }
    let unsupported = || GwError::UnsupportedModel { model, base: form.base.clone() };
    match model {
        GwModelTag::Rank => Ok(GwClassResult::Rank { rank: form.rank() }),
        GwModelTag::Signature => match form.base {
            FieldTag::Rational | FieldTag::RealClosed => {
                let pos = form.entries.iter().filter(|e| e.is_positive()).count() as i64;
                Ok(GwClassResult::Signature { signature: 2 * pos - form.rank() as i64 })
            }
            _ => Err(unsupported()),
        },
        GwModelTag::FiniteField => match form.base {
            FieldTag::FiniteField { p, e: 1 } if is_prime(p) => {
                let field = PrimeField { p };
                let disc = finite_entries(&field, form)?.iter().fold(1u64, |acc, v| field.mul(&acc, v));
                Ok(GwClassResult::FiniteField { rank: form.rank(), disc_nonsquare: field.legendre(disc) == -1 })
            }
            _ => Err(unsupported()),
        },
        GwModelTag::ZEps => classify_zeps(form, opts).map(|value| GwClassResult::ZEps { value }),
    }
}

fn finite_entries(field: &PrimeField, form: &DiagonalForm) -> Result<Vec<u64>, GwError> {
    form.entries
        .iter()
        .map(|e| match field.from_rational(e) {
            Some(v) if v != 0 => Ok(v),
            _ => Err(GwError::ZeroEntry),
        })
        .collect()
}

fn classify_zeps(form: &DiagonalForm, opts: &ClassifyOptions) -> Result<GwElement, GwError> {
    let rank = form.rank() as i64;
    match &form.base {
        FieldTag::ComplexClosed => Ok(GwElement::from(rank)),
        FieldTag::RealClosed => {
            let pos = form.entries.iter().filter(|e| e.is_positive()).count() as i64;
            Ok(GwElement::new(pos, rank - pos))
        }
        FieldTag::FiniteField { p, e: 1 } if is_prime(*p) => {
            let field = PrimeField { p: *p };
            let entries = finite_entries(&field, form)?;
            let nonsquares = entries.iter().filter(|&&v| field.legendre(v) == -1).count() as i64;
            if *p == 2 {
                return Ok(GwElement::from(rank));
            }
            if p % 4 == 3 {
                // −1 is a non-square: every non-square entry is ⟨−1⟩.
                Ok(GwElement::new(rank - nonsquares, nonsquares))
            } else if nonsquares % 2 == 0 {
                // ⟨−1⟩ = ⟨1⟩; an even number of non-squares pairs off into copies of h = 2.
                Ok(GwElement::from(rank))
            } else {
                Err(GwError::NotInZEpsImage {
                    entry: "discriminant".into(),
                    diagnostic: format!("odd number of non-square entries over F_{p} with p ≡ 1 mod 4"),
                })
            }
        }
        FieldTag::Rational | FieldTag::Generic => classify_rational_zeps(&form.entries, opts),
        other => Err(GwError::UnsupportedModel { model: GwModelTag::ZEps, base: other.clone() }),
    }
}

/// Square-class reduction over `ℚ`: entries of class `±1` map to `1`/`ε`;
/// pairs `⟨a⟩ + ⟨−a⟩` of the same non-trivial class collapse to `h`.
fn classify_rational_zeps(entries: &[BigRational], opts: &ClassifyOptions) -> Result<GwElement, GwError> {
    let mut value = GwElement::zero();
    // kernel -> (positive count, negative count, example entry)
    let mut others: BTreeMap<BigInt, (usize, usize, String)> = BTreeMap::new();
    for entry in entries {
        let n = entry.numer() * entry.denom();
        let positive = n.is_positive();
        let magnitude = n.abs();
        if is_perfect_square(&magnitude) {
            value += &if positive { GwElement::one() } else { GwElement::eps() };
            continue;
        }
        match squarefree_kernel(&magnitude, opts.squarefree_bound) {
            Ok(kernel) => {
                let slot = others.entry(kernel).or_insert((0, 0, entry.to_string()));
                if positive {
                    slot.0 += 1;
                } else {
                    slot.1 += 1;
                }
            }
            Err(residual) => {
                return Err(GwError::NotInZEpsImage {
                    entry: entry.to_string(),
                    diagnostic: format!(
                        "square class undetermined: cofactor {residual} left after trial division up to {}",
                        opts.squarefree_bound
                    ),
                })
            }
        }
    }
    for (kernel, (pos, neg, example)) in others {
        let paired = pos.min(neg);
        value += &GwElement::h_multiple(paired as i64);
        let left = (pos - paired + neg - paired) as i64;
        if left == 0 {
            continue;
        }
        // ⟨a, a⟩ ≅ ⟨1, 1⟩ exactly when a is a sum of two squares
        if left % 2 == 0 && is_sum_of_two_squares(&kernel) {
            value += &if pos > neg { GwElement::from(left) } else { GwElement::new(0, left) };
            continue;
        }
        return Err(GwError::NotInZEpsImage {
            entry: example,
            diagnostic: format!("square class {kernel} is not ±1 and does not reduce to ⟨1⟩, ⟨−1⟩ and hyperbolic planes"),
        });
    }
    Ok(value)
}

/// For a fully factored squarefree `n > 0`: no prime `≡ 3 mod 4` divides `n`.
fn is_sum_of_two_squares(n: &BigInt) -> bool {
    let mut rest = n.clone();
    let mut d = BigInt::from(2);
    while &d * &d <= rest {
        if (&rest % &d).is_zero() {
            if (&d % 4u32) == BigInt::from(3) {
                return false;
            }
            rest /= &d;
        } else {
            d += 1u32;
        }
    }
    rest == BigInt::one() || (&rest % 4u32) != BigInt::from(3)
}

fn is_perfect_square(n: &BigInt) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Square-free part of `n > 0`. Returns the unresolved cofactor when trial
/// division up to `bound` leaves a non-square part that might hide a square factor.
fn squarefree_kernel(n: &BigInt, bound: u64) -> Result<BigInt, BigInt> {
    let mut rest = n.clone();
    let mut kernel = BigInt::one();
    let mut d: u64 = 2;
    while d <= bound {
        let dd = BigInt::from(d);
        if &dd * &dd > rest {
            break;
        }
        let mut parity = false;
        while (&rest % &dd).is_zero() {
            rest /= &dd;
            parity = !parity;
        }
        if parity {
            kernel *= &dd;
        }
        d += 1;
    }
    if rest.is_one() {
        return Ok(kernel);
    }
    let b = BigInt::from(bound);
    if is_perfect_square(&rest) {
        Ok(kernel)
    } else if rest < &b * &b || d <= bound {
        // Every prime factor of `rest` exceeds the trial bound and rest < bound²,
        // or the loop stopped at √rest: `rest` is prime.
        Ok(kernel * rest)
    } else {
        Err(rest)
    }
}
