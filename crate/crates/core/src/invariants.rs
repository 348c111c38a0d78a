//! Complete linear-isomorphism invariants of chains.
//!
//! Every vertex `i` (1-based) carries a flag `0 ⊂ U_{i1} ⊆ ... ⊆ U_{ii} = U_i`
//! built left to right: a forward link pushes the previous flag through the
//! map, a backward link starts with the kernel and pulls the previous flag
//! back. The dimensions `n_{ij} = dim U_{ij}` determine the chain up to
//! isomorphism, and with it the multiset of interval summands `L_{pq}`.
//!
//! Two independent routes recover the multiset from the table:
//! [`multiplicities_sweep`] replays the layer bookkeeping vertex by vertex,
//! while [`multiplicities_solve`] solves the linear system formed by the
//! tables of all intervals. [`canonical_decomposition`] goes further and
//! builds an explicit base change onto the canonical direct sum.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::chain::{interval_chain, Chain, ChainError, ChainShape, Direction, LinearIso};
use crate::field::{Field, FieldValue};
use crate::linalg::{LinAlgError, Matrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("table is not realizable: {0}")]
    NotRealizable(String),
    #[error("table has {table} vertices but the orientation has {orientation}")]
    TableShape { table: usize, orientation: usize },
    #[error("internal verification failed: {0}")]
    Defect(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// The nested subspaces `U_{i1} ⊆ ... ⊆ U_{ii}` at one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    /// 1-based vertex.
    pub vertex: usize,
    pub subspaces: Vec<Subspace>,
}

impl Flag {
    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(Subspace::dim).collect()
    }
}

/// Flags at every vertex, left to right.
pub fn flags(c: &Chain) -> Vec<Flag> {
    let field = c.field();
    let mut out: Vec<Flag> = Vec::with_capacity(c.t());
    out.push(Flag { vertex: 1, subspaces: alloc::vec![Subspace::full(field, c.dims()[0])] });
    for (i, (dir, a)) in c.directions().iter().zip(c.maps()).enumerate() {
        let prev = &out[i].subspaces;
        let next_dim = c.dims()[i + 1];
        let mut next = Vec::with_capacity(prev.len() + 1);
        match dir {
            Direction::Forward => {
                next.extend(prev.iter().map(|u| a.map_subspace(u).expect("map matches its domain")));
            }
            Direction::Backward => {
                next.push(a.kernel());
                next.extend(
                    prev[..prev.len() - 1]
                        .iter()
                        .map(|u| a.preimage(u).expect("map matches its codomain")),
                );
            }
        }
        next.push(Subspace::full(field, next_dim));
        out.push(Flag { vertex: i + 2, subspaces: next });
    }
    out
}

/// Lower-triangular table `n_{ij}`, `1 <= j <= i <= t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantTable {
    rows: Vec<Vec<usize>>,
}

impl InvariantTable {
    /// Row `i - 1` must have exactly `i` entries.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Option<InvariantTable> {
        if rows.is_empty() || rows.iter().enumerate().any(|(i, r)| r.len() != i + 1) {
            return None;
        }
        Some(InvariantTable { rows })
    }

    pub fn zero(t: usize) -> InvariantTable {
        InvariantTable { rows: (1..=t).map(|i| alloc::vec![0; i]).collect() }
    }

    pub fn t(&self) -> usize {
        self.rows.len()
    }

    /// `n_{ij}`, 1-based; `n_{i0} = 0`.
    pub fn get(&self, i: usize, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            self.rows[i - 1][j - 1]
        }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Entrywise sum; `None` if the sizes differ.
    pub fn add(&self, other: &InvariantTable) -> Option<InvariantTable> {
        if self.t() != other.t() {
            return None;
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Some(InvariantTable { rows })
    }

    /// Scales every entry by `k`.
    pub fn scaled(&self, k: usize) -> InvariantTable {
        InvariantTable { rows: self.rows.iter().map(|r| r.iter().map(|x| x * k).collect()).collect() }
    }

    /// The vertex dimensions `n_{ii}`.
    pub fn dims(&self) -> Vec<usize> {
        self.rows.iter().map(|r| *r.last().expect("rows are nonempty")).collect()
    }
}

impl fmt::Display for InvariantTable {
    /// One line per vertex: `i: n_i1 ... n_ii`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            write!(f, "{}:", i + 1)?;
            for n in row {
                write!(f, " {n}")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

pub fn invariant_table(c: &Chain) -> InvariantTable {
    InvariantTable { rows: flags(c).iter().map(Flag::dims).collect() }
}

/// An interval `[start, end]` of vertices, 1-based and inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Interval {
        Interval { start, end }
    }

    /// Whether the 1-based vertex `k` lies in the interval.
    pub fn contains(&self, k: usize) -> bool {
        self.start <= k && k <= self.end
    }

    /// All intervals of a chain with `t` vertices, ascending.
    pub fn all(t: usize) -> impl Iterator<Item = Interval> {
        (1..=t).flat_map(move |p| (p..=t).map(move |q| Interval::new(p, q)))
    }
}

/// Multiplicities `m_{pq}` of the interval summands of a chain with `t` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalMultiset {
    t: usize,
    counts: BTreeMap<Interval, usize>,
}

impl IntervalMultiset {
    pub fn new(t: usize) -> IntervalMultiset {
        IntervalMultiset { t, counts: BTreeMap::new() }
    }

    /// Builds from `((start, end), count)` pairs. Panics on an interval outside `1..=t`.
    pub fn from_counts(t: usize, counts: &[((usize, usize), usize)]) -> IntervalMultiset {
        let mut m = IntervalMultiset::new(t);
        for &((p, q), k) in counts {
            m.add(Interval::new(p, q), k);
        }
        m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn add(&mut self, interval: Interval, count: usize) {
        assert!(
            interval.start >= 1 && interval.start <= interval.end && interval.end <= self.t,
            "interval out of range"
        );
        if count > 0 {
            *self.counts.entry(interval).or_insert(0) += count;
        }
    }

    pub fn get(&self, interval: Interval) -> usize {
        self.counts.get(&interval).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Nonzero multiplicities in ascending `(start, end)` order.
    pub fn iter(&self) -> impl Iterator<Item = (Interval, usize)> + '_ {
        self.counts.iter().map(|(i, k)| (*i, *k))
    }

    /// Number of summands.
    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    /// Summands in canonical order, each repeated by its multiplicity.
    pub fn summands(&self) -> Vec<Interval> {
        self.iter().flat_map(|(i, k)| core::iter::repeat_n(i, k)).collect()
    }

    /// Dimension of the direct sum at each vertex.
    pub fn vertex_dims(&self) -> Vec<usize> {
        (1..=self.t)
            .map(|k| self.iter().filter(|(i, _)| i.contains(k)).map(|(_, m)| m).sum())
            .collect()
    }

    /// The canonical direct sum: summands in ascending `(start, end)` order,
    /// each contributing one basis vector at every vertex it covers.
    pub fn to_chain(&self, directions: &[Direction], field: Field) -> Result<Chain, InvariantError> {
        if directions.len() + 1 != self.t {
            return Err(InvariantError::TableShape { table: self.t, orientation: directions.len() + 1 });
        }
        let summands = self.summands();
        // position of each summand in the basis of each vertex it covers
        let positions: Vec<Vec<Option<usize>>> = (1..=self.t)
            .map(|k| {
                let mut next = 0;
                summands
                    .iter()
                    .map(|s| {
                        s.contains(k).then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let shape = ChainShape::new(directions.to_vec(), self.vertex_dims())?;
        let maps = directions
            .iter()
            .enumerate()
            .map(|(i, dir)| {
                let (r, c) = shape.map_shape(i);
                let mut m = Matrix::zeros(field, r, c);
                for (left, right) in positions[i].iter().zip(&positions[i + 1]) {
                    if let (Some(left), Some(right)) = (*left, *right) {
                        match dir {
                            Direction::Forward => m.set(right, left, field.one()),
                            Direction::Backward => m.set(left, right, field.one()),
                        }
                    }
                }
                m
            })
            .collect();
        Ok(Chain::new(field, shape, maps)?)
    }
}

impl fmt::Display for IntervalMultiset {
    /// One `L p q x m` line per interval, ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.iter() {
            writeln!(f, "L {} {} x {m}", i.start, i.end)?;
        }
        Ok(())
    }
}

/// Invariant table of the interval chain `L_{pq}` for the given orientation.
pub fn interval_table(directions: &[Direction], p: usize, q: usize) -> Result<InvariantTable, InvariantError> {
    Ok(invariant_table(&interval_chain(directions, p, q, Field::Rational)?))
}

fn check_table(table: &InvariantTable, directions: &[Direction]) -> Result<(), InvariantError> {
    if table.t() != directions.len() + 1 {
        return Err(InvariantError::TableShape { table: table.t(), orientation: directions.len() + 1 });
    }
    Ok(())
}

/// One group of live intervals sharing a first vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layer {
    /// 1-based vertex where these intervals begin.
    pub first: usize,
    pub count: usize,
}

/// Bookkeeping of the left-to-right sweep: after vertex `i` the layers are
/// listed in flag-slot order, layer `j` holding the `n_{ij} - n_{i,j-1}`
/// intervals alive at `i` whose basis vectors enter the flag at slot `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepState {
    pub vertex: usize,
    pub layers: Vec<Layer>,
    pub finished: IntervalMultiset,
}

fn slot_count(table: &InvariantTable, i: usize, j: usize) -> Result<usize, InvariantError> {
    let (hi, lo) = (table.get(i, j), table.get(i, j - 1));
    hi.checked_sub(lo).ok_or_else(|| {
        InvariantError::NotRealizable(alloc::format!("n[{i}][{j}] = {hi} < n[{i}][{}] = {lo}", j - 1))
    })
}

impl SweepState {
    pub fn start(table: &InvariantTable) -> SweepState {
        SweepState {
            vertex: 1,
            layers: alloc::vec![Layer { first: 1, count: table.get(1, 1) }],
            finished: IntervalMultiset::new(table.t()),
        }
    }

    /// Moves across the link between `self.vertex` and the next vertex.
    pub fn step(&mut self, dir: Direction, table: &InvariantTable) -> Result<(), InvariantError> {
        let i = self.vertex;
        let next = i + 1;
        // slot of old layer j (0-based) at the next vertex, 0-based
        let shift = match dir {
            Direction::Forward => 0,
            Direction::Backward => 1,
        };
        let mut layers = Vec::with_capacity(self.layers.len() + 1);
        if dir == Direction::Backward {
            layers.push(Layer { first: next, count: slot_count(table, next, 1)? });
        }
        for (j, layer) in self.layers.iter().enumerate() {
            let count = slot_count(table, next, j + 1 + shift)?;
            let died = layer.count.checked_sub(count).ok_or_else(|| {
                InvariantError::NotRealizable(alloc::format!(
                    "layer starting at {} grows from {} to {count} between vertices {i} and {next}",
                    layer.first,
                    layer.count
                ))
            })?;
            self.finished.add(Interval::new(layer.first, i), died);
            layers.push(Layer { first: layer.first, count });
        }
        if dir == Direction::Forward {
            layers.push(Layer { first: next, count: slot_count(table, next, next)? });
        }
        self.layers = layers;
        self.vertex = next;
        Ok(())
    }

    /// Closes every surviving layer at the last vertex.
    pub fn finish(mut self) -> IntervalMultiset {
        for layer in &self.layers {
            self.finished.add(Interval::new(layer.first, self.vertex), layer.count);
        }
        self.finished
    }
}

/// Interval multiplicities by sweeping the table left to right.
pub fn multiplicities_sweep(
    table: &InvariantTable,
    directions: &[Direction],
) -> Result<IntervalMultiset, InvariantError> {
    check_table(table, directions)?;
    let mut state = SweepState::start(table);
    for &dir in directions {
        state.step(dir, table)?;
    }
    Ok(state.finish())
}

/// Interval multiplicities by solving `sum m_pq * table(L_pq) = table` over
/// the rationals and demanding a nonnegative integral solution.
pub fn multiplicities_solve(
    table: &InvariantTable,
    directions: &[Direction],
) -> Result<IntervalMultiset, InvariantError> {
    check_table(table, directions)?;
    let t = table.t();
    let q = Field::Rational;
    let intervals: Vec<Interval> = Interval::all(t).collect();
    let columns = intervals
        .iter()
        .map(|iv| {
            let tab = interval_table(directions, iv.start, iv.end)?;
            Ok(tab.rows.iter().flatten().map(|&n| q.from_i64(n as i64)).collect())
        })
        .collect::<Result<Vec<Vec<FieldValue>>, InvariantError>>()?;
    let system = Matrix::from_columns(q, intervals.len(), &columns);
    if system.rank() != intervals.len() {
        return Err(InvariantError::Defect("interval tables are linearly dependent".into()));
    }
    let rhs: Vec<FieldValue> = table.rows.iter().flatten().map(|&n| q.from_i64(n as i64)).collect();
    let solution = system
        .solve(&rhs)?
        .ok_or_else(|| InvariantError::NotRealizable("no solution of the interval system".into()))?;
    let mut out = IntervalMultiset::new(t);
    for (iv, m) in intervals.iter().zip(&solution) {
        match m.as_integer() {
            Some(k) if k >= 0 => out.add(*iv, k as usize),
            _ => {
                return Err(InvariantError::NotRealizable(alloc::format!(
                    "multiplicity of L {} {} would be {m}",
                    iv.start,
                    iv.end
                )))
            }
        }
    }
    Ok(out)
}

/// Same field, orientation, dimensions and invariant table.
pub fn linearly_isomorphic(a: &Chain, b: &Chain) -> bool {
    a.field() == b.field()
        && a.directions() == b.directions()
        && a.dims() == b.dims()
        && invariant_table(a) == invariant_table(b)
}

/// For each vertex (0-based index), the first vertex of the intervals owning
/// each flag slot, in slot order.
pub fn slot_starts(directions: &[Direction]) -> Vec<Vec<usize>> {
    let mut out = alloc::vec![alloc::vec![1]];
    for (i, dir) in directions.iter().enumerate() {
        let mut next = out[i].clone();
        match dir {
            Direction::Forward => next.push(i + 2),
            Direction::Backward => next.insert(0, i + 2),
        }
        out.push(next);
    }
    out
}

/// Right-to-left counterpart of [`slot_starts`]: the last vertex of the
/// intervals owning each slot of the flags of the reversed chain.
fn slot_ends(directions: &[Direction]) -> Vec<Vec<usize>> {
    let t = directions.len() + 1;
    let reversed: Vec<Direction> = directions.iter().rev().map(|d| d.flipped()).collect();
    let mut labels = slot_starts(&reversed);
    labels.reverse();
    for row in &mut labels {
        for v in row.iter_mut() {
            *v = t + 1 - *v;
        }
    }
    labels
}

fn defect(msg: impl Into<String>) -> InvariantError {
    InvariantError::Defect(msg.into())
}

/// Computes the interval multiplicities together with a base change `phi`
/// such that `c.transport(phi)` is exactly the canonical direct sum
/// [`IntervalMultiset::to_chain`].
///
/// Each vertex carries two flags: the left flag of [`flags`] and the same
/// construction run from the right end. A summand `L_{pq}` lives in the slot
/// labelled `p` of the first and the slot labelled `q` of the second. Basis
/// vectors of new summands are taken from the graded piece of that slot pair
/// (earliest RREF rows first); vectors of continuing summands are pushed
/// through forward maps or pulled back, inside the right flag, through
/// backward maps. The result is checked against the canonical sum.
pub fn canonical_decomposition(c: &Chain) -> Result<(IntervalMultiset, LinearIso), InvariantError> {
    let t = c.t();
    let field = c.field();
    let dirs = c.directions();
    let multiset = multiplicities_sweep(&invariant_table(c), dirs)?;
    let summands = multiset.summands();

    let left = flags(c);
    let mut right = flags(&c.reversed());
    right.reverse();
    let starts = slot_starts(dirs);
    let ends = slot_ends(dirs);

    let mut vectors: Vec<Vec<Option<Vec<FieldValue>>>> = alloc::vec![alloc::vec![None; t]; summands.len()];
    let mut phi = Vec::with_capacity(t);

    for k in 0..t {
        let vertex = k + 1;
        let slot_of_end = |end: usize| ends[k].iter().position(|&e| e == end).expect("end label present");

        if k > 0 {
            let a = &c.maps()[k - 1];
            for (s, iv) in summands.iter().enumerate() {
                if !(iv.contains(vertex - 1) && iv.contains(vertex)) {
                    continue;
                }
                let prev = vectors[s][k - 1].as_ref().expect("summand has a vector at the previous vertex");
                let v = match dirs[k - 1] {
                    Direction::Forward => a.mul_vec(prev)?,
                    Direction::Backward => {
                        let basis = right[k].subspaces[slot_of_end(iv.end)].basis().transpose();
                        let y = a
                            .mul(&basis)?
                            .solve(prev)?
                            .ok_or_else(|| defect(alloc::format!("no preimage at vertex {vertex}")))?;
                        basis.mul_vec(&y)?
                    }
                };
                vectors[s][k] = Some(v);
            }
        }

        let slot_of_start = starts[k].iter().position(|&p| p == vertex).expect("start label present");
        let l = &left[k].subspaces;
        let r = &right[k].subspaces;
        let fresh: Vec<usize> = (0..summands.len()).filter(|&s| summands[s].start == vertex).collect();
        for group in fresh.chunk_by(|&x, &y| summands[x].end == summands[y].end) {
            let j = slot_of_end(summands[group[0]].end);
            let i = slot_of_start;
            let piece = l[i].intersection(&r[j])?;
            let mut span = Subspace::zero(field, c.dims()[k]);
            if i > 0 {
                span = span.sum(&l[i - 1].intersection(&r[j])?)?;
            }
            if j > 0 {
                span = span.sum(&l[i].intersection(&r[j - 1])?)?;
            }
            let mut members = group.iter();
            let mut next = members.next();
            for b in piece.basis_vectors() {
                let Some(&s) = next else { break };
                if span.contains_vector(&b)? {
                    continue;
                }
                span = span.sum(&Subspace::span(field, c.dims()[k], core::slice::from_ref(&b)))?;
                vectors[s][k] = Some(b);
                next = members.next();
            }
            if next.is_some() {
                return Err(defect(alloc::format!(
                    "graded piece at vertex {vertex} is too small for L {} {}",
                    summands[group[0]].start,
                    summands[group[0]].end
                )));
            }
        }

        let columns: Vec<Vec<FieldValue>> = vectors.iter().filter_map(|v| v[k].clone()).collect();
        let basis = Matrix::from_columns(field, c.dims()[k], &columns);
        if basis.cols() != c.dims()[k] {
            return Err(defect(alloc::format!("vertex {vertex} received {} basis vectors", basis.cols())));
        }
        phi.push(basis.inverse().map_err(|_| defect(alloc::format!("basis at vertex {vertex} is dependent")))?);
    }

    let iso = LinearIso::new(phi)?;
    let moved = c.transport(&iso)?;
    if moved != multiset.to_chain(dirs, field)? {
        return Err(defect("transported chain differs from the canonical direct sum"));
    }
    Ok((multiset, iso))
}
