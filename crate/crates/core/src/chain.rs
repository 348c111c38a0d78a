//! Chains of linear maps `U_1 - U_2 - ... - U_t` where each link points left or right.
//!
//! Map `i` (0-based) joins vertices `i` and `i + 1`. A forward map is a
//! `dims[i+1] x dims[i]` matrix; a backward map goes from the right vertex to
//! the left one and is `dims[i] x dims[i+1]`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, FieldValue};
use crate::linalg::{LinAlgError, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// `U_i -> U_{i+1}`
    Forward,
    /// `U_i <- U_{i+1}`
    Backward,
}

impl Direction {
    pub fn symbol(self) -> char {
        match self {
            Direction::Forward => '>',
            Direction::Backward => '<',
        }
    }

    pub fn from_symbol(c: char) -> Option<Direction> {
        match c {
            '>' => Some(Direction::Forward),
            '<' => Some(Direction::Backward),
            _ => None,
        }
    }

    pub fn flipped(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// Parses an orientation string such as `"><>"`.
pub fn parse_directions(s: &str) -> Option<Vec<Direction>> {
    s.chars().map(Direction::from_symbol).collect()
}

pub fn format_directions(dirs: &[Direction]) -> String {
    dirs.iter().map(|d| d.symbol()).collect()
}

/// Every orientation pattern of a chain with `t` vertices.
pub fn all_orientations(t: usize) -> Vec<Vec<Direction>> {
    let links = t.saturating_sub(1);
    (0..1usize << links)
        .map(|bits| {
            (0..links)
                .map(|i| if bits >> i & 1 == 0 { Direction::Forward } else { Direction::Backward })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainShape {
    directions: Vec<Direction>,
    dims: Vec<usize>,
}

impl ChainShape {
    pub fn new(directions: Vec<Direction>, dims: Vec<usize>) -> Result<ChainShape, ChainError> {
        if dims.is_empty() || directions.len() + 1 != dims.len() {
            return Err(ChainError::BadShape { links: directions.len(), vertices: dims.len() });
        }
        Ok(ChainShape { directions, dims })
    }

    pub fn t(&self) -> usize {
        self.dims.len()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Required `(rows, cols)` of map `i`.
    pub fn map_shape(&self, i: usize) -> (usize, usize) {
        match self.directions[i] {
            Direction::Forward => (self.dims[i + 1], self.dims[i]),
            Direction::Backward => (self.dims[i], self.dims[i + 1]),
        }
    }
}

/// A broken chain invariant, as reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MapCount { expected: usize, found: usize },
    MapShape { index: usize, expected: (usize, usize), found: (usize, usize) },
    MapField { index: usize, expected: Field, found: Field },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MapCount { expected, found } => {
                write!(f, "expected {expected} maps, found {found}")
            }
            Violation::MapShape { index, expected, found } => write!(
                f,
                "map {} has shape {}x{}, expected {}x{}",
                index + 1,
                found.0,
                found.1,
                expected.0,
                expected.1
            ),
            Violation::MapField { index, expected, found } => {
                write!(f, "map {} is over {found}, expected {expected}", index + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("{links} links cannot join {vertices} vertices")]
    BadShape { links: usize, vertices: usize },
    #[error("invalid chain: {}", .0.iter().map(|v| alloc::format!("{v}")).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("chains have different orientations or fields")]
    OrientationMismatch,
    #[error("interval [{start}, {end}] is not inside 1..={t}")]
    IntervalOutOfRange { start: usize, end: usize, t: usize },
    #[error("base change at vertex {0} is singular")]
    Singular(usize),
    #[error("base change does not match the chain: {0}")]
    IsoMismatch(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Checks every chain invariant and returns all violations found.
pub fn validate(field: Field, shape: &ChainShape, maps: &[Matrix]) -> Vec<Violation> {
    let mut out = Vec::new();
    let expected = shape.directions.len();
    if maps.len() != expected {
        out.push(Violation::MapCount { expected, found: maps.len() });
    }
    for (index, m) in maps.iter().enumerate().take(expected) {
        let want = shape.map_shape(index);
        if m.shape() != want {
            out.push(Violation::MapShape { index, expected: want, found: m.shape() });
        }
        if m.field() != field {
            out.push(Violation::MapField { index, expected: field, found: m.field() });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    field: Field,
    shape: ChainShape,
    maps: Vec<Matrix>,
}

impl Chain {
    pub fn new(field: Field, shape: ChainShape, maps: Vec<Matrix>) -> Result<Chain, ChainError> {
        let violations = validate(field, &shape, &maps);
        if !violations.is_empty() {
            return Err(ChainError::Invalid(violations));
        }
        Ok(Chain { field, shape, maps })
    }

    /// All maps zero.
    pub fn zero(field: Field, shape: ChainShape) -> Chain {
        let maps = (0..shape.directions.len())
            .map(|i| {
                let (r, c) = shape.map_shape(i);
                Matrix::zeros(field, r, c)
            })
            .collect();
        Chain { field, shape, maps }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn shape(&self) -> &ChainShape {
        &self.shape
    }

    pub fn t(&self) -> usize {
        self.shape.t()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.shape.directions
    }

    pub fn dims(&self) -> &[usize] {
        &self.shape.dims
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// Re-checks the invariants; always `Ok` for chains built through [`Chain::new`].
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let v = validate(self.field, &self.shape, &self.maps);
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    /// The same representation read from right to left.
    pub fn reversed(&self) -> Chain {
        let directions = self.shape.directions.iter().rev().map(|d| d.flipped()).collect();
        let dims = self.shape.dims.iter().rev().copied().collect();
        let maps = self.maps.iter().rev().cloned().collect();
        Chain { field: self.field, shape: ChainShape { directions, dims }, maps }
    }

    /// Componentwise block-diagonal sum.
    pub fn direct_sum(&self, other: &Chain) -> Result<Chain, ChainError> {
        if self.field != other.field || self.shape.directions != other.shape.directions {
            return Err(ChainError::OrientationMismatch);
        }
        let dims = self.dims().iter().zip(other.dims()).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.direct_sum(b))
            .collect::<Result<_, _>>()?;
        Ok(Chain {
            field: self.field,
            shape: ChainShape { directions: self.shape.directions.clone(), dims },
            maps,
        })
    }

    /// Applies the base change `phi`: the result `B` satisfies
    /// `phi_{i+1} A_i = B_i phi_i` on forward links and
    /// `phi_i A_i = B_i phi_{i+1}` on backward links.
    pub fn transport(&self, phi: &LinearIso) -> Result<Chain, ChainError> {
        phi.check_against(self)?;
        let inverses = phi
            .mats
            .iter()
            .enumerate()
            .map(|(i, m)| m.inverse().map_err(|_| ChainError::Singular(i + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, a)| match self.shape.directions[i] {
                Direction::Forward => phi.mats[i + 1].mul(a)?.mul(&inverses[i]),
                Direction::Backward => phi.mats[i].mul(a)?.mul(&inverses[i + 1]),
            })
            .collect::<Result<_, _>>()?;
        Ok(Chain { field: self.field, shape: self.shape.clone(), maps })
    }
}

/// The indecomposable chain with a copy of the field at vertices `start..=end`
/// (1-based), identity maps between them and zero spaces elsewhere.
pub fn interval_chain(
    directions: &[Direction],
    start: usize,
    end: usize,
    field: Field,
) -> Result<Chain, ChainError> {
    let t = directions.len() + 1;
    if start < 1 || start > end || end > t {
        return Err(ChainError::IntervalOutOfRange { start, end, t });
    }
    let dims = (1..=t).map(|k| usize::from((start..=end).contains(&k))).collect();
    let shape = ChainShape { directions: directions.to_vec(), dims };
    let mut chain = Chain::zero(field, shape);
    for i in start..end {
        // link between 1-based vertices i and i + 1
        chain.maps[i - 1] = Matrix::identity(field, 1);
    }
    Ok(chain)
}

/// A family of invertible base changes, one per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearIso {
    mats: Vec<Matrix>,
}

impl LinearIso {
    /// Wraps the per-vertex matrices; each must be square. Invertibility is
    /// checked where it matters, in [`Chain::transport`] and [`LinearIso::inverse`].
    pub fn new(mats: Vec<Matrix>) -> Result<LinearIso, ChainError> {
        if let Some((i, m)) = mats.iter().enumerate().find(|(_, m)| !m.is_square()) {
            return Err(ChainError::IsoMismatch(alloc::format!(
                "matrix at vertex {} is {}x{}",
                i + 1,
                m.rows(),
                m.cols()
            )));
        }
        Ok(LinearIso { mats })
    }

    pub fn identity(field: Field, dims: &[usize]) -> LinearIso {
        LinearIso { mats: dims.iter().map(|&d| Matrix::identity(field, d)).collect() }
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    /// `(other ∘ self)_i = other_i * self_i`.
    pub fn then(&self, other: &LinearIso) -> Result<LinearIso, ChainError> {
        if self.mats.len() != other.mats.len() {
            return Err(ChainError::IsoMismatch("different vertex counts".into()));
        }
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| b.mul(a))
            .collect::<Result<_, _>>()?;
        Ok(LinearIso { mats })
    }

    pub fn inverse(&self) -> Result<LinearIso, ChainError> {
        let mats = self
            .mats
            .iter()
            .enumerate()
            .map(|(i, m)| m.inverse().map_err(|_| ChainError::Singular(i + 1)))
            .collect::<Result<_, _>>()?;
        Ok(LinearIso { mats })
    }

    fn check_against(&self, c: &Chain) -> Result<(), ChainError> {
        if self.mats.len() != c.t() {
            return Err(ChainError::IsoMismatch(alloc::format!(
                "{} matrices for {} vertices",
                self.mats.len(),
                c.t()
            )));
        }
        for (i, (m, &d)) in self.mats.iter().zip(c.dims()).enumerate() {
            if m.rows() != d {
                return Err(ChainError::IsoMismatch(alloc::format!(
                    "vertex {} has dimension {d} but its matrix is {}x{}",
                    i + 1,
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != c.field {
                return Err(LinAlgError::ContextMismatch(c.field, m.field()).into());
            }
        }
        Ok(())
    }
}

/// Integer pool used when none is given: `-3..=3` over the rationals, every
/// residue over a prime field.
pub fn default_pool(field: Field) -> RangeInclusive<i64> {
    match field {
        Field::Rational => -3..=3,
        Field::Prime(p) => 0..=i64::from(p) - 1,
    }
}

fn sample<R: Rng>(field: Field, rng: &mut R, pool: &RangeInclusive<i64>) -> FieldValue {
    field.from_i64(rng.gen_range(pool.clone()))
}

pub fn random_matrix<R: Rng>(
    field: Field,
    rows: usize,
    cols: usize,
    rng: &mut R,
    pool: &RangeInclusive<i64>,
) -> Matrix {
    let entries = (0..rows * cols).map(|_| sample(field, rng, pool)).collect();
    Matrix::from_entries(field, rows, cols, entries).expect("sampled entries match the field")
}

/// Random chain whose maps have uniformly chosen rank bounds: each map is a
/// product `X * Y` through a space of random dimension `k <= min(rows, cols)`,
/// so kernels and cokernels of every size occur.
pub fn random_chain_with<R: Rng>(
    shape: &ChainShape,
    field: Field,
    rng: &mut R,
    pool: &RangeInclusive<i64>,
) -> Chain {
    let maps = (0..shape.directions.len())
        .map(|i| {
            let (r, c) = shape.map_shape(i);
            let k = rng.gen_range(0..=r.min(c));
            let x = random_matrix(field, r, k, rng, pool);
            let y = random_matrix(field, k, c, rng, pool);
            x.mul(&y).expect("inner dimensions agree")
        })
        .collect();
    Chain { field, shape: shape.clone(), maps }
}

/// Deterministic in `seed`.
pub fn random_chain(shape: &ChainShape, field: Field, seed: u64, pool: RangeInclusive<i64>) -> Chain {
    random_chain_with(shape, field, &mut ChaCha8Rng::seed_from_u64(seed), &pool)
}

/// Rejection-samples an invertible `n x n` matrix from [`default_pool`].
pub fn random_invertible_with<R: Rng>(n: usize, field: Field, rng: &mut R) -> Matrix {
    let pool = default_pool(field);
    loop {
        let m = random_matrix(field, n, n, rng, &pool);
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn random_invertible(n: usize, field: Field, seed: u64) -> Matrix {
    random_invertible_with(n, field, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A random invertible base change for `c`.
pub fn random_iso_with<R: Rng>(field: Field, dims: &[usize], rng: &mut R) -> LinearIso {
    LinearIso { mats: dims.iter().map(|&d| random_invertible_with(d, field, rng)).collect() }
}
