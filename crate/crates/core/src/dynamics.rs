//! Minimal Cantor dynamics: odometers (add with carry) and Bratteli–Vershik
//! successor maps on ordered diagrams.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symbolic::{Alphabet, Language, Point, Symbol, SymbolicError, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("odometer digit base d_{index} = {value} must be at least 2")]
    DigitBaseTooSmall { index: usize, value: u32 },
    #[error("odometer period must be nonempty")]
    EmptyPeriod,
    #[error("digit {digit} at position {position} is outside [0, {base})")]
    InvalidDigit { position: usize, digit: u32, base: u32 },
    #[error("level must be at least 1")]
    LevelZero,
    #[error("diagram: {0}")]
    InvalidDiagram(String),
    #[error("path: {0}")]
    InvalidPath(String),
    #[error("diagram is not properly ordered at level {level}: {candidates} candidate extreme paths")]
    NotProperlyOrdered { level: usize, candidates: usize },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// A homeomorphism of a symbolic Cantor set acting on eventually periodic points.
pub trait CantorDynamics: Send + Sync {
    fn name(&self) -> &str;
    fn step(&self, p: &Point, direction: Direction) -> Result<Point, DynamicsError>;

    /// `φ^j(p)` for any integer `j`.
    fn iterate(&self, p: &Point, j: i64) -> Result<Point, DynamicsError> {
        let dir = if j >= 0 { Direction::Forward } else { Direction::Backward };
        let mut q = p.clone();
        for _ in 0..j.unsigned_abs() {
            q = self.step(&q, dir)?;
        }
        Ok(q)
    }
}

/// Digit bases `d_1, d_2, …` given as an eventually periodic sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OdometerBases", into = "OdometerBases")]
pub struct OdometerSpec {
    preperiod: Vec<u32>,
    period: Vec<u32>,
    alphabet: Option<Alphabet>,
}

/// Serialized form of an [`OdometerSpec`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OdometerBases {
    #[serde(default)]
    pub preperiod: Vec<u32>,
    pub period: Vec<u32>,
}

impl TryFrom<OdometerBases> for OdometerSpec {
    type Error = DynamicsError;

    fn try_from(b: OdometerBases) -> Result<Self, Self::Error> {
        Self::new(b.preperiod, b.period)
    }
}

impl From<OdometerSpec> for OdometerBases {
    fn from(s: OdometerSpec) -> Self {
        Self { preperiod: s.preperiod, period: s.period }
    }
}

impl OdometerSpec {
    pub fn new(preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self, DynamicsError> {
        if period.is_empty() {
            return Err(DynamicsError::EmptyPeriod);
        }
        for (index, &value) in preperiod.iter().chain(&period).enumerate() {
            if value < 2 {
                return Err(DynamicsError::DigitBaseTooSmall { index: index + 1, value });
            }
        }
        let max = preperiod.iter().chain(&period).copied().max().unwrap_or(2);
        let alphabet = Some(Alphabet::digits(max as usize)?);
        Ok(Self { preperiod, period, alphabet })
    }

    pub fn binary() -> Self {
        Self::new(vec![], vec![2]).expect("valid")
    }

    pub fn constant(d: u32) -> Result<Self, DynamicsError> {
        Self::new(vec![], vec![d])
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    /// `d_{i+1}` (0-based position `i`).
    pub fn base(&self, i: usize) -> u32 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// `d_1 ⋯ d_m`.
    pub fn product(&self, m: usize) -> u128 {
        (0..m).map(|i| self.base(i) as u128).product()
    }

    fn horizon(&self, p: &Point) -> usize {
        let l = num_integer::lcm(p.period().len(), self.period.len());
        p.preperiod().len().max(self.preperiod.len()) + l
    }

    pub fn validate_point(&self, p: &Point) -> Result<(), DynamicsError> {
        for i in 0..self.horizon(p) {
            let digit = p.symbol_at(i) as u32;
            let base = self.base(i);
            if digit >= base {
                return Err(DynamicsError::InvalidDigit { position: i + 1, digit, base });
            }
        }
        Ok(())
    }

    pub fn max_point(&self) -> Point {
        let pre = Word::new(self.preperiod.iter().map(|&d| (d - 1) as Symbol).collect());
        let per = Word::new(self.period.iter().map(|&d| (d - 1) as Symbol).collect());
        Point::new(pre, per).expect("nonempty period")
    }

    pub fn zero_point(&self) -> Point {
        Point::constant(0)
    }

    /// Add (`Forward`) or subtract (`Backward`) `(1, 0, 0, …)` with carry.
    pub fn odometer_step(&self, p: &Point, direction: Direction) -> Result<Point, DynamicsError> {
        self.validate_point(p)?;
        let horizon = self.horizon(p);
        let saturated = |i: usize| match direction {
            Direction::Forward => p.symbol_at(i) as u32 == self.base(i) - 1,
            Direction::Backward => p.symbol_at(i) == 0,
        };
        let Some(k) = (0..horizon).find(|&i| !saturated(i)) else {
            return Ok(match direction {
                Direction::Forward => self.zero_point(),
                Direction::Backward => self.max_point(),
            });
        };
        let mut head: Vec<Symbol> = (0..k)
            .map(|i| match direction {
                Direction::Forward => 0,
                Direction::Backward => (self.base(i) - 1) as Symbol,
            })
            .collect();
        let xk = p.symbol_at(k);
        head.push(match direction {
            Direction::Forward => xk + 1,
            Direction::Backward => xk - 1,
        });
        Ok(p.shift(k + 1).prepend(&Word::new(head)))
    }

    /// Add `j` with carry to a finite digit word, wrapping modulo `d_1 ⋯ d_m`.
    pub fn add_to_word(&self, word: &Word, j: i64) -> Word {
        let m = word.len();
        if m == 0 {
            return Word::empty();
        }
        let total = self.product(m) as i128;
        let mut value: i128 = 0;
        let mut place: i128 = 1;
        for i in 0..m {
            value += word.symbols()[i] as i128 * place;
            place *= self.base(i) as i128;
        }
        let mut v = (value + j as i128).rem_euclid(total);
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let b = self.base(i) as i128;
            out.push((v % b) as Symbol);
            v /= b;
        }
        Word::new(out)
    }

    /// Level-`m` cylinder words; `φ(C_μ) = C_ν` defines the permutation.
    pub fn cylinder_permutation(&self, m: usize) -> Result<CylinderPermutation, DynamicsError> {
        if m == 0 {
            return Err(DynamicsError::LevelZero);
        }
        let words = self.level(m);
        let image = words
            .iter()
            .map(|w| {
                let next = self.add_to_word(w, 1);
                words.binary_search(&next).expect("image is a level-m word")
            })
            .collect();
        Ok(CylinderPermutation { words, image })
    }
}

impl CantorDynamics for OdometerSpec {
    fn name(&self) -> &str {
        "odometer"
    }

    fn step(&self, p: &Point, direction: Direction) -> Result<Point, DynamicsError> {
        self.odometer_step(p, direction)
    }
}

impl Language for OdometerSpec {
    fn alphabet(&self) -> &Alphabet {
        self.alphabet.as_ref().expect("alphabet built in constructor")
    }

    fn next_symbols(&self, word: &Word) -> Vec<Symbol> {
        (0..self.base(word.len()) as Symbol).collect()
    }

    fn is_admissible(&self, word: &Word) -> bool {
        word.symbols().iter().enumerate().all(|(i, &s)| (s as u32) < self.base(i))
    }

    fn point_admissible(&self, p: &Point) -> bool {
        self.validate_point(p).is_ok()
    }

    fn extend_to_point(&self, word: &Word) -> Option<Point> {
        self.is_admissible(word).then(|| Point::constant(0).prepend(word))
    }
}

/// Permutation of the level-`m` cylinders induced by a homeomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderPermutation {
    words: Vec<Word>,
    image: Vec<usize>,
}

impl CylinderPermutation {
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn image_of(&self, word: &Word) -> Option<&Word> {
        let i = self.words.binary_search(word).ok()?;
        Some(&self.words[self.image[i]])
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.image.len()];
        let mut lengths = Vec::new();
        for start in 0..self.image.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.image[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    pub fn is_single_cycle(&self) -> bool {
        self.cycle_lengths().len() == 1
    }

    /// The cycle through `start`, beginning with `start`.
    pub fn orbit(&self, start: &Word) -> Vec<Word> {
        let Ok(first) = self.words.binary_search(start) else {
            return Vec::new();
        };
        let mut out = vec![self.words[first].clone()];
        let mut i = self.image[first];
        while i != first {
            out.push(self.words[i].clone());
            i = self.image[i];
        }
        out
    }
}

/// Edge into `range` at some level, identified by its rank in the order on
/// the edges with that range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub range: usize,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPath {
    edges: Vec<Edge>,
}

impl OrderedPath {
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Order indices read as a word.
    pub fn order_word(&self) -> Word {
        Word::new(self.edges.iter().map(|e| e.order as Symbol).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extreme {
    Min,
    Max,
}

/// Serialized form: vertex counts per level, row-major transition matrices,
/// and, per level and range vertex, the ordered list of source vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDocument {
    pub vertex_counts: Vec<usize>,
    pub transitions: Vec<Vec<u32>>,
    pub edge_orders: Vec<Vec<Vec<usize>>>,
}

/// Ordered Bratteli diagram truncated at a finite depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratteliDiagram {
    vertex_counts: Vec<usize>,
    transitions: Vec<Vec<Vec<u32>>>,
    edge_orders: Vec<Vec<Vec<usize>>>,
}

impl BratteliDiagram {
    /// `transitions[n-1]` is `S_n` (`|V_n| × |V_{n-1}|`); `edge_orders[n-1][v]`
    /// lists the source vertices of the edges into `v ∈ V_n`, lowest first.
    pub fn new(
        vertex_counts: Vec<usize>,
        transitions: Vec<Vec<Vec<u32>>>,
        edge_orders: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, DynamicsError> {
        let bad = |m: String| Err(DynamicsError::InvalidDiagram(m));
        if vertex_counts.first() != Some(&1) {
            return bad("level 0 must have exactly one vertex".into());
        }
        let depth = vertex_counts.len() - 1;
        if transitions.len() != depth || edge_orders.len() != depth {
            return bad(format!("expected {depth} transition matrices and edge orders"));
        }
        for n in 1..=depth {
            let s = &transitions[n - 1];
            let (rows, cols) = (vertex_counts[n], vertex_counts[n - 1]);
            if rows == 0 {
                return bad(format!("level {n} has no vertices"));
            }
            if s.len() != rows || s.iter().any(|r| r.len() != cols) {
                return bad(format!("S_{n} must be {rows}x{cols}"));
            }
            for (v, row) in s.iter().enumerate() {
                if row.iter().all(|&x| x == 0) {
                    return bad(format!("vertex {v} at level {n} has no incoming edge"));
                }
            }
            for u in 0..cols {
                if s.iter().all(|r| r[u] == 0) {
                    return bad(format!("vertex {u} at level {} has no outgoing edge", n - 1));
                }
            }
            let orders = &edge_orders[n - 1];
            if orders.len() != rows {
                return bad(format!("level {n} needs an edge order per vertex"));
            }
            for (v, order) in orders.iter().enumerate() {
                let mut counts = vec![0u32; cols];
                for &src in order {
                    if src >= cols {
                        return bad(format!("edge order at level {n} vertex {v} names source {src}"));
                    }
                    counts[src] += 1;
                }
                if counts != s[v] {
                    return bad(format!("edge order at level {n} vertex {v} disagrees with S_{n}"));
                }
            }
        }
        Ok(Self { vertex_counts, transitions, edge_orders })
    }

    pub fn from_document(doc: &DiagramDocument) -> Result<Self, DynamicsError> {
        let depth = doc.vertex_counts.len().saturating_sub(1);
        if doc.transitions.len() != depth {
            return Err(DynamicsError::InvalidDiagram(format!("expected {depth} transition matrices")));
        }
        let mut transitions = Vec::with_capacity(depth);
        for n in 1..=depth {
            let (rows, cols) = (doc.vertex_counts[n], doc.vertex_counts[n - 1]);
            let flat = &doc.transitions[n - 1];
            if flat.len() != rows * cols {
                return Err(DynamicsError::InvalidDiagram(format!("S_{n} needs {} entries", rows * cols)));
            }
            transitions.push(flat.chunks(cols).map(<[u32]>::to_vec).collect());
        }
        Self::new(doc.vertex_counts.clone(), transitions, doc.edge_orders.clone())
    }

    pub fn to_document(&self) -> DiagramDocument {
        DiagramDocument {
            vertex_counts: self.vertex_counts.clone(),
            transitions: self.transitions.iter().map(|s| s.iter().flatten().copied().collect()).collect(),
            edge_orders: self.edge_orders.clone(),
        }
    }

    /// Stationary diagram with `S = [[1,1],[1,0]]`; into the first vertex the
    /// edge from the first vertex precedes the edge from the second.
    pub fn golden_mean(depth: usize) -> Self {
        let mut counts = vec![1];
        let mut transitions = Vec::new();
        let mut orders = Vec::new();
        for n in 1..=depth {
            counts.push(2);
            if n == 1 {
                transitions.push(vec![vec![1], vec![1]]);
                orders.push(vec![vec![0], vec![0]]);
            } else {
                transitions.push(vec![vec![1, 1], vec![1, 0]]);
                orders.push(vec![vec![0, 1], vec![0]]);
            }
        }
        Self::new(counts, transitions, orders).expect("golden-mean diagram is valid")
    }

    pub fn depth(&self) -> usize {
        self.vertex_counts.len() - 1
    }

    pub fn vertex_count(&self, level: usize) -> usize {
        self.vertex_counts[level]
    }

    /// `S_n` for `1 ≤ n ≤ depth`.
    pub fn transition(&self, n: usize) -> &[Vec<u32>] {
        &self.transitions[n - 1]
    }

    pub fn in_degree(&self, level: usize, v: usize) -> usize {
        self.edge_orders[level - 1][v].len()
    }

    pub fn source(&self, level: usize, edge: Edge) -> usize {
        self.edge_orders[level - 1][edge.range][edge.order]
    }

    pub fn validate_path(&self, path: &OrderedPath) -> Result<(), DynamicsError> {
        if path.len() > self.depth() {
            return Err(DynamicsError::InvalidPath(format!("length {} exceeds depth {}", path.len(), self.depth())));
        }
        let mut prev = 0;
        for (i, e) in path.edges.iter().enumerate() {
            let level = i + 1;
            if e.range >= self.vertex_count(level) || e.order >= self.in_degree(level, e.range) {
                return Err(DynamicsError::InvalidPath(format!("edge {i} out of range")));
            }
            if self.source(level, *e) != prev {
                return Err(DynamicsError::InvalidPath(format!(
                    "edge {i} does not start where edge {} ends",
                    i.max(1) - 1
                )));
            }
            prev = e.range;
        }
        Ok(())
    }

    pub fn path(&self, edges: Vec<Edge>) -> Result<OrderedPath, DynamicsError> {
        let p = OrderedPath { edges };
        self.validate_path(&p)?;
        Ok(p)
    }

    /// All paths from the root of length `n`, in lexicographic edge order.
    pub fn all_paths(&self, n: usize) -> Vec<OrderedPath> {
        let mut paths = vec![OrderedPath { edges: Vec::new() }];
        for level in 1..=n {
            let mut next = Vec::new();
            for p in &paths {
                let end = p.edges.last().map_or(0, |e| e.range);
                for v in 0..self.vertex_count(level) {
                    for order in 0..self.in_degree(level, v) {
                        let e = Edge { range: v, order };
                        if self.source(level, e) == end {
                            let mut edges = p.edges.clone();
                            edges.push(e);
                            next.push(OrderedPath { edges });
                        }
                    }
                }
            }
            paths = next;
        }
        paths.sort();
        paths
    }

    fn is_extreme(&self, level: usize, e: Edge, which: Extreme) -> bool {
        match which {
            Extreme::Min => e.order == 0,
            Extreme::Max => e.order + 1 == self.in_degree(level, e.range),
        }
    }

    /// The path of length `level` ending at `v` whose edges are all extreme.
    pub fn extreme_path_to(&self, level: usize, v: usize, which: Extreme) -> OrderedPath {
        let mut edges = Vec::with_capacity(level);
        let mut vertex = v;
        for l in (1..=level).rev() {
            let order = match which {
                Extreme::Min => 0,
                Extreme::Max => self.in_degree(l, vertex) - 1,
            };
            let e = Edge { range: vertex, order };
            edges.push(e);
            vertex = self.source(l, e);
        }
        edges.reverse();
        OrderedPath { edges }
    }

    /// One all-extreme path per vertex of `V_n`.
    pub fn extreme_paths_per_vertex(&self, n: usize, which: Extreme) -> Result<Vec<OrderedPath>, DynamicsError> {
        if n == 0 || n > self.depth() {
            return Err(DynamicsError::LevelZero);
        }
        Ok((0..self.vertex_count(n)).map(|v| self.extreme_path_to(n, v, which)).collect())
    }

    /// The length-`n` truncation of the unique extreme infinite path. Uniqueness
    /// is checked by following extreme edges down to the diagram's depth.
    pub fn extreme_paths(&self, n: usize, which: Extreme) -> Result<OrderedPath, DynamicsError> {
        let per_vertex = self.extreme_paths_per_vertex(n, which)?;
        let mut alive: Vec<bool> = vec![true; self.vertex_count(n)];
        // vertices at level l that continue along extreme edges to the depth
        let mut continues: Vec<bool> = vec![true; self.vertex_count(self.depth())];
        for l in (n..self.depth()).rev() {
            continues = (0..self.vertex_count(l))
                .map(|u| {
                    (0..self.vertex_count(l + 1)).any(|w| {
                        continues[w]
                            && (0..self.in_degree(l + 1, w)).any(|order| {
                                let e = Edge { range: w, order };
                                self.is_extreme(l + 1, e, which) && self.source(l + 1, e) == u
                            })
                    })
                })
                .collect();
        }
        for (v, a) in alive.iter_mut().enumerate() {
            *a = continues[v];
        }
        let candidates: Vec<usize> = (0..alive.len()).filter(|&v| alive[v]).collect();
        if candidates.len() != 1 {
            return Err(DynamicsError::NotProperlyOrdered { level: n, candidates: candidates.len() });
        }
        Ok(per_vertex[candidates[0]].clone())
    }

    /// Vershik successor on length-`n` paths. The all-maximal path into `v`
    /// wraps to the all-minimal path into `v + 1 (mod |V_n|)`, so the level-`n`
    /// towers are traversed one after another.
    pub fn vershik_successor(&self, p: &OrderedPath) -> Result<OrderedPath, DynamicsError> {
        self.validate_path(p)?;
        let n = p.len();
        if n == 0 {
            return Ok(p.clone());
        }
        let k = (0..n).find(|&i| !self.is_extreme(i + 1, p.edges[i], Extreme::Max));
        match k {
            None => {
                let v = p.edges[n - 1].range;
                Ok(self.extreme_path_to(n, (v + 1) % self.vertex_count(n), Extreme::Min))
            }
            Some(k) => {
                let level = k + 1;
                let f = Edge { range: p.edges[k].range, order: p.edges[k].order + 1 };
                let src = self.source(level, f);
                let mut edges = self.extreme_path_to(k, src, Extreme::Min).edges;
                edges.push(f);
                edges.extend_from_slice(&p.edges[k + 1..]);
                Ok(OrderedPath { edges })
            }
        }
    }
}

/// One vertex per level with `d_k` edges into level `k`, ordered `0..d_k`.
pub fn odometer_as_bratteli(spec: &OdometerSpec, depth: usize) -> Result<BratteliDiagram, DynamicsError> {
    if depth == 0 {
        return Err(DynamicsError::LevelZero);
    }
    let counts = vec![1; depth + 1];
    let transitions = (0..depth).map(|i| vec![vec![spec.base(i)]]).collect();
    let orders = (0..depth).map(|i| vec![vec![0; spec.base(i) as usize]]).collect();
    BratteliDiagram::new(counts, transitions, orders)
}

/// Digit word of a path in a single-vertex-per-level diagram.
pub fn path_to_digits(p: &OrderedPath) -> Word {
    p.order_word()
}

pub fn digits_to_path(d: &BratteliDiagram, word: &Word) -> Result<OrderedPath, DynamicsError> {
    d.path(word.symbols().iter().map(|&s| Edge { range: 0, order: s as usize }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> Point {
        Alphabet::binary().parse_point(s).unwrap()
    }

    #[test]
    fn odometer_step_examples() {
        let bin = OdometerSpec::binary();
        assert_eq!(bin.odometer_step(&pt("(1)"), Direction::Forward).unwrap(), pt("(0)"));
        let q = bin.odometer_step(&pt("10(0)"), Direction::Forward).unwrap();
        assert_eq!(q, pt("01(0)"));
        assert_eq!(bin.odometer_step(&q, Direction::Forward).unwrap(), pt("11(0)"));
        assert_eq!(bin.odometer_step(&pt("(0)"), Direction::Backward).unwrap(), pt("(1)"));

        // d = (3,2,3,2,…): first digit 2 = d_1 − 1 carries into the second
        let spec = OdometerSpec::new(vec![], vec![3, 2]).unwrap();
        let a = Alphabet::digits(3).unwrap();
        let p = a.parse_point("2(0)").unwrap();
        assert_eq!(spec.odometer_step(&p, Direction::Forward).unwrap(), a.parse_point("01(0)").unwrap());
        let bad = a.parse_point("02(0)").unwrap();
        assert!(matches!(spec.odometer_step(&bad, Direction::Forward), Err(DynamicsError::InvalidDigit { .. })));
    }

    #[test]
    fn carry_into_periodic_tail_recanonicalizes() {
        let bin = OdometerSpec::binary();
        let q = bin.odometer_step(&pt("0(1)"), Direction::Forward).unwrap();
        assert_eq!(q, pt("1(1)"));
        assert_eq!(bin.odometer_step(&q, Direction::Forward).unwrap(), pt("(0)"));
        let r = bin.odometer_step(&pt("1(10)"), Direction::Forward).unwrap();
        assert_eq!(r, pt("001(10)"));
    }

    #[test]
    fn cylinder_permutation_examples() {
        let bin = OdometerSpec::binary();
        let p1 = bin.cylinder_permutation(1).unwrap();
        assert_eq!(p1.cycle_lengths(), vec![2]);
        let p2 = bin.cylinder_permutation(2).unwrap();
        let a = Alphabet::binary();
        let orbit: Vec<String> = p2.orbit(&Word::new(vec![0, 0])).iter().map(|w| a.format_word(w)).collect();
        assert_eq!(orbit, ["00", "10", "01", "11"]);
        let spec = OdometerSpec::new(vec![3, 2], vec![2]).unwrap();
        assert_eq!(spec.cylinder_permutation(2).unwrap().cycle_lengths(), vec![6]);
        assert!(bin.cylinder_permutation(0).is_err());
    }

    #[test]
    fn golden_mean_extreme_paths() {
        let d = BratteliDiagram::golden_mean(6);
        let min = d.extreme_paths(2, Extreme::Min).unwrap();
        assert_eq!(min.order_word(), Word::new(vec![0, 0]));
        let max1 = d.extreme_paths_per_vertex(1, Extreme::Max).unwrap();
        assert_eq!(max1.len(), 2);
        assert!(max1.iter().all(|p| p.edges()[0].order == 0));
        // both alternating all-maximal paths continue forever
        assert!(matches!(
            d.extreme_paths(3, Extreme::Max),
            Err(DynamicsError::NotProperlyOrdered { candidates: 2, .. })
        ));
        for n in 1..=4 {
            let mins = d.extreme_paths_per_vertex(n, Extreme::Min).unwrap();
            let maxs = d.extreme_paths_per_vertex(n, Extreme::Max).unwrap();
            if n >= 2 {
                assert_ne!(mins[0], maxs[0]);
            }
        }
    }

    #[test]
    fn golden_mean_vershik_orbit_is_one_cycle() {
        let d = BratteliDiagram::golden_mean(5);
        for n in 1..=5 {
            let paths = d.all_paths(n);
            let start = d.extreme_path_to(n, 0, Extreme::Min);
            let mut p = start.clone();
            let mut seen = std::collections::BTreeSet::new();
            for _ in 0..paths.len() {
                assert!(seen.insert(p.clone()));
                p = d.vershik_successor(&p).unwrap();
            }
            assert_eq!(p, start);
            assert_eq!(seen.len(), paths.len());
        }
    }

    #[test]
    fn odometer_diagram_shape() {
        let d = odometer_as_bratteli(&OdometerSpec::binary(), 3).unwrap();
        assert!((1..=3).all(|n| d.transition(n) == [vec![2]]));
        assert_eq!(d.all_paths(3).len(), 8);
        let d = odometer_as_bratteli(&OdometerSpec::new(vec![3, 2], vec![2]).unwrap(), 2).unwrap();
        assert_eq!(d.all_paths(2).len(), 6);
    }

    #[test]
    fn diagram_document_roundtrip_and_validation() {
        let d = BratteliDiagram::golden_mean(3);
        assert_eq!(BratteliDiagram::from_document(&d.to_document()).unwrap(), d);
        let mut doc = d.to_document();
        doc.edge_orders[1][0] = vec![0, 0];
        assert!(BratteliDiagram::from_document(&doc).is_err());
        let mut doc = d.to_document();
        doc.transitions[1] = vec![1, 1, 0, 0];
        assert!(BratteliDiagram::from_document(&doc).is_err());
    }

    #[test]
    fn invalid_paths_are_rejected() {
        let d = BratteliDiagram::golden_mean(3);
        // second-vertex edge from level 1 vertex 1 does not exist
        let bad = OrderedPath { edges: vec![Edge { range: 1, order: 0 }, Edge { range: 1, order: 0 }] };
        assert!(d.vershik_successor(&bad).is_err());
    }
}
