//! Max-min dispersion palettes: choose `n` colors of the RGB cube so that
//! the smallest pairwise L1 difference is as large as possible.
//!
//! [`construct`] seeds each restart with [`greedy_farthest`] and polishes it
//! with [`local_search_improve`]. [`brute_force_optimal`] enumerates a small
//! channel grid exhaustively and serves as the ground truth in tests.
//!
//! The search space is either the full 8-bit cube or a uniform grid of `g`
//! levels per channel, `round(i·255/(g−1))`. Internally colors are handled as
//! per-channel level indices; the full cube is the 256-level grid.
//! Every tie is broken lexicographically on `(r, g, b)`, so all results are
//! deterministic.

use std::cmp::{Ordering, Reverse};

use crate::color::{color_diff, min_pairwise_diff, Color, Palette, MAX_COLOR_DIFF};
use crate::{Error, Result};

pub const DEFAULT_RESTARTS: usize = 8;
pub const DEFAULT_STEPS: [u16; 4] = [64, 16, 4, 1];

/// Largest number of subsets [`brute_force_optimal`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionConfig {
    pub n: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Coordinate step sizes in grid levels, strictly decreasing, ending at 1.
    pub step_schedule: Vec<u16>,
    pub start_color: Color,
    /// Restrict the search to `g` levels per channel.
    pub grid_levels: Option<usize>,
}

impl ConstructionConfig {
    pub fn new(n: usize) -> Self {
        ConstructionConfig {
            n,
            seed: 0,
            restarts: DEFAULT_RESTARTS,
            step_schedule: DEFAULT_STEPS.to_vec(),
            start_color: Color::BLACK,
            grid_levels: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!(
                "palette size must be at least 2, got {}",
                self.n
            )));
        }
        if self.restarts < 1 {
            return Err(Error::domain("restarts must be at least 1"));
        }
        let steps = &self.step_schedule;
        if steps.last() != Some(&1) || steps.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::domain(format!(
                "step schedule {steps:?} must be strictly decreasing and end at 1"
            )));
        }
        let grid = Grid::new(self.grid_levels)?;
        if self.n > grid.candidates() {
            return Err(Error::domain(format!(
                "{} colors requested but the grid has only {} candidates",
                self.n,
                grid.candidates()
            )));
        }
        grid.index_of(self.start_color)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionResult {
    pub palette: Palette,
    pub achieved_min_diff: u16,
    pub restarts_used: usize,
    /// Accepted local-search moves in the winning restart.
    pub improving_moves: usize,
}

/// Uniform channel grid.
#[derive(Debug, Clone)]
struct Grid {
    values: Vec<u8>,
}

type Point = [usize; 3];

impl Grid {
    fn new(levels: Option<usize>) -> Result<Self> {
        let g = levels.unwrap_or(256);
        if !(2..=256).contains(&g) {
            return Err(Error::domain(format!(
                "grid levels must be in 2..=256, got {g}"
            )));
        }
        let values = (0..g)
            .map(|i| (i as f64 * 255.0 / (g - 1) as f64).round() as u8)
            .collect();
        Ok(Grid { values })
    }

    fn levels(&self) -> usize {
        self.values.len()
    }

    fn candidates(&self) -> usize {
        self.levels().pow(3)
    }

    fn color(&self, p: Point) -> Color {
        Color::new(self.values[p[0]], self.values[p[1]], self.values[p[2]])
    }

    fn index_of(&self, c: Color) -> Result<Point> {
        let mut out = [0; 3];
        for (slot, v) in out.iter_mut().zip(c.channels()) {
            *slot = self.values.binary_search(&v).map_err(|_| {
                Error::domain(format!(
                    "color {c} is not on the {}-level grid",
                    self.levels()
                ))
            })?;
        }
        Ok(out)
    }

    fn dist(&self, a: Point, b: Point) -> u16 {
        color_diff(self.color(a), self.color(b))
    }
}

/// Greedy farthest-point palette.
///
/// Starts from `start`; each further color maximizes its minimum L1
/// difference to the colors already chosen, ties going to the
/// lexicographically smallest candidate.
pub fn greedy_farthest(n: usize, start: Color, grid_levels: Option<usize>) -> Result<Palette> {
    let grid = Grid::new(grid_levels)?;
    if n < 1 || n > grid.candidates() {
        return Err(Error::domain(format!(
            "cannot pick {n} colors from {} candidates",
            grid.candidates()
        )));
    }
    let start = grid.index_of(start)?;
    let points = greedy_points(&grid, n, start);
    let name = format!("greedy{n}");
    Palette::new(name, points.into_iter().map(|p| grid.color(p)).collect())
}

fn greedy_points(grid: &Grid, n: usize, start: Point) -> Vec<Point> {
    let g = grid.levels();
    // Distance from every candidate to its nearest chosen color, plus the
    // maximum of each (r, g) row so rows the new color cannot reach are
    // skipped.
    let mut nearest = vec![u16::MAX; g * g * g];
    let mut row_max = vec![u16::MAX; g * g];
    let mut chosen = vec![start];
    let mut axis = [vec![0u16; g], vec![0u16; g], vec![0u16; g]];
    while chosen.len() < n {
        let last = grid.color(*chosen.last().expect("non-empty"));
        for (table, v) in axis.iter_mut().zip(last.channels()) {
            for (t, &level) in table.iter_mut().zip(&grid.values) {
                *t = level.abs_diff(v) as u16;
            }
        }
        for (row_index, (row, max)) in nearest
            .chunks_exact_mut(g)
            .zip(row_max.iter_mut())
            .enumerate()
        {
            let drg = axis[0][row_index / g] + axis[1][row_index % g];
            if drg >= *max {
                continue;
            }
            let mut m = 0u16;
            for (slot, &db) in row.iter_mut().zip(&axis[2]) {
                let d = (*slot).min(drg + db);
                *slot = d;
                m = m.max(d);
            }
            *max = m;
        }
        let best = *row_max.iter().max().expect("non-empty grid");
        let row = row_max
            .iter()
            .position(|&m| m == best)
            .expect("maximum is attained");
        let col = nearest[row * g..(row + 1) * g]
            .iter()
            .position(|&d| d == best)
            .expect("row maximum is attained");
        chosen.push([row / g, row % g, col]);
    }
    chosen
}

/// Exponent of the pair repulsion used to break ties between moves.
const REPULSION_EXPONENT: i32 = 8;

/// `(765/d)^8` for every possible pair distance; coincident colors get an
/// effectively infinite weight.
fn repulsion_table() -> Vec<f64> {
    (0..=MAX_COLOR_DIFF)
        .map(|d| match d {
            0 => f64::MAX / 1e6,
            d => (f64::from(MAX_COLOR_DIFF) / f64::from(d)).powi(REPULSION_EXPONENT),
        })
        .collect()
}

/// Local-search objective: a larger minimum pairwise distance first, then
/// fewer pairs at that minimum, then a lower total repulsion.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Objective {
    min: u16,
    count: u32,
    energy: f64,
}

impl Objective {
    const EMPTY: Objective = Objective {
        min: u16::MAX,
        count: 0,
        energy: 0.0,
    };

    fn push(&mut self, d: u16, weight: f64) {
        match d.cmp(&self.min) {
            Ordering::Less => {
                self.min = d;
                self.count = 1;
            }
            Ordering::Equal => self.count += 1,
            Ordering::Greater => {}
        }
        self.energy += weight;
    }

    fn merge(self, other: Objective) -> Objective {
        let (min, count) = match self.min.cmp(&other.min) {
            Ordering::Less => (self.min, self.count),
            Ordering::Greater => (other.min, other.count),
            Ordering::Equal => (self.min, self.count + other.count),
        };
        Objective {
            min,
            count,
            energy: self.energy + other.energy,
        }
    }

    /// Strict improvement. Energy must drop by more than rounding noise.
    fn improves_on(&self, other: &Objective) -> bool {
        match (self.min, Reverse(self.count)).cmp(&(other.min, Reverse(other.count))) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self.energy < other.energy * (1.0 - 1e-12),
        }
    }
}

/// Steepest-ascent improvement of the minimum pairwise difference.
///
/// A move shifts one color by a step from the schedule along any of the 26
/// directions of the cube neighborhood (each channel moves by −step, 0 or
/// +step). At each step size, largest first, the best strictly improving
/// move is applied until none remains; the schedule is repeated until a
/// whole pass makes no move.
///
/// Moves are ranked by the minimum pairwise distance, then by fewer pairs
/// at that minimum, then by a lower repulsion energy `Σ (765/d)^8` over all
/// pairs. The minimum therefore never decreases, and the energy term lets
/// the search cross plateaus where the minimum is pinned by several pairs.
pub fn local_search_improve(p: &Palette, cfg: &ConstructionConfig) -> Result<Palette> {
    let grid = Grid::new(cfg.grid_levels)?;
    let points = p
        .explicit_colors()?
        .iter()
        .map(|&c| grid.index_of(c))
        .collect::<Result<Vec<_>>>()?;
    let (points, _) = improve_points(&grid, points, &cfg.step_schedule);
    Palette::new(
        p.name.clone(),
        points.into_iter().map(|q| grid.color(q)).collect(),
    )
}

/// The 26 unit moves of the cube neighborhood, in lexicographic order.
const DIRECTIONS: [[i8; 3]; 26] = {
    let mut out = [[0i8; 3]; 26];
    let mut k = 0;
    let mut code = 0;
    while code < 27 {
        let d = [
            (code / 9) as i8 - 1,
            ((code / 3) % 3) as i8 - 1,
            (code % 3) as i8 - 1,
        ];
        if code != 13 {
            out[k] = d;
            k += 1;
        }
        code += 1;
    }
    out
};

fn improve_points(grid: &Grid, mut points: Vec<Point>, steps: &[u16]) -> (Vec<Point>, usize) {
    let n = points.len();
    if n < 2 {
        return (points, 0);
    }
    let top = grid.levels() - 1;
    let weights = repulsion_table();
    let mut moves = 0;
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    let mut point_energy = vec![0.0; n];
    loop {
        let moves_before_pass = moves;
        for &step in steps {
            let step = step as isize;
            loop {
                pairs.clear();
                point_energy.fill(0.0);
                let mut current = Objective::EMPTY;
                for i in 0..n {
                    for j in i + 1..n {
                        let d = grid.dist(points[i], points[j]);
                        let w = weights[d as usize];
                        current.push(d, w);
                        point_energy[i] += w;
                        point_energy[j] += w;
                        pairs.push((d, i, j));
                    }
                }
                pairs.sort_unstable();

                let mut best: Option<(Objective, usize, Point)> = None;
                for i in 0..n {
                    // Pairs that do not involve i.
                    let mut rest = Objective {
                        energy: current.energy - point_energy[i],
                        ..Objective::EMPTY
                    };
                    for &(d, a, b) in &pairs {
                        if rest.count > 0 && d > rest.min {
                            break;
                        }
                        if a != i && b != i {
                            rest.push(d, 0.0);
                        }
                    }

                    'dirs: for dir in DIRECTIONS {
                        let mut moved = points[i];
                        for (slot, d) in moved.iter_mut().zip(dir) {
                            match slot.checked_add_signed(d as isize * step) {
                                Some(t) if t <= top => *slot = t,
                                _ => continue 'dirs,
                            }
                        }
                        let mut own = Objective::EMPTY;
                        for (j, &q) in points.iter().enumerate() {
                            if j != i {
                                let d = grid.dist(moved, q);
                                own.push(d, weights[d as usize]);
                            }
                        }
                        let candidate = rest.merge(own);
                        if candidate.improves_on(best.as_ref().map_or(&current, |b| &b.0)) {
                            best = Some((candidate, i, moved));
                        }
                    }
                }
                match best {
                    Some((_, i, moved)) => {
                        points[i] = moved;
                        moves += 1;
                    }
                    None => break,
                }
            }
        }
        if moves == moves_before_pass {
            return (points, moves);
        }
    }
}

/// 64-bit linear congruential generator for restart start colors.
///
/// `state ← state · 6364136223846793005 + 1442695040888963407 (mod 2^64)`;
/// a channel level is the high 32 bits of the new state mapped onto
/// `0..levels` by multiply-shift. For the full cube this is the top byte.
#[derive(Debug, Clone)]
pub struct StartColorGenerator {
    state: u64,
}

impl StartColorGenerator {
    pub fn new(seed: u64) -> Self {
        StartColorGenerator { state: seed }
    }

    fn next_level(&mut self, levels: usize) -> usize {
        self.state = self
            .state
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        (((self.state >> 32) * levels as u64) >> 32) as usize
    }

    fn next_point(&mut self, levels: usize) -> Point {
        [
            self.next_level(levels),
            self.next_level(levels),
            self.next_level(levels),
        ]
    }

    /// Next start color on the full 8-bit cube.
    pub fn next_color(&mut self) -> Color {
        let [r, g, b] = self.next_point(256);
        Color::new(r as u8, g as u8, b as u8)
    }
}

/// Builds a maximally separated palette of `cfg.n` colors.
///
/// Restart 0 starts from `cfg.start_color`, the others from colors drawn by
/// [`StartColorGenerator`] seeded with `cfg.seed`. The best restart wins by
/// minimum difference, then by the lexicographically smallest color
/// sequence. Restarts may run in parallel; the result does not depend on
/// scheduling.
pub fn construct(cfg: &ConstructionConfig) -> Result<ConstructionResult> {
    cfg.validate()?;
    let grid = Grid::new(cfg.grid_levels)?;
    let mut rng = StartColorGenerator::new(cfg.seed);
    let starts: Vec<Point> = std::iter::once(grid.index_of(cfg.start_color)?)
        .chain((1..cfg.restarts).map(|_| rng.next_point(grid.levels())))
        .collect();

    let run = |start: &Point| {
        let seeded = greedy_points(&grid, cfg.n, *start);
        let (points, moves) = improve_points(&grid, seeded, &cfg.step_schedule);
        let colors: Vec<Color> = points.into_iter().map(|p| grid.color(p)).collect();
        let min = pairwise_min(&colors);
        (min, colors, moves)
    };

    #[cfg(feature = "parallel")]
    let runs: Vec<_> = {
        use rayon::prelude::*;
        starts.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<_> = starts.iter().map(run).collect();

    let (min, colors, moves) = runs
        .into_iter()
        .min_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)))
        .expect("at least one restart");
    let palette = Palette::new(format!("ms{}-seed{}", cfg.n, cfg.seed), colors)?;
    debug_assert_eq!(min_pairwise_diff(&palette).ok(), Some(min));
    Ok(ConstructionResult {
        palette,
        achieved_min_diff: min,
        restarts_used: cfg.restarts,
        improving_moves: moves,
    })
}

fn pairwise_min(colors: &[Color]) -> u16 {
    let mut m = u16::MAX;
    for (i, &a) in colors.iter().enumerate() {
        for &b in &colors[i + 1..] {
            m = m.min(color_diff(a, b));
        }
    }
    m
}

fn binomial(n: u128, k: u128, cap: u128) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
        if acc > cap {
            return cap + 1;
        }
    }
    acc
}

/// Exhaustive max-min search over all `n`-subsets of a `grid_levels` grid.
///
/// Subsets are visited in lexicographic order and only a strictly better
/// subset replaces the incumbent, so the lexicographically first optimum is
/// returned. Branches whose partial minimum cannot beat the incumbent are
/// pruned.
pub fn brute_force_optimal(n: usize, grid_levels: usize) -> Result<ConstructionResult> {
    let grid = Grid::new(Some(grid_levels))?;
    let total = grid.candidates();
    if n < 2 || n > total {
        return Err(Error::domain(format!(
            "cannot pick {n} colors from {total} candidates"
        )));
    }
    let subsets = binomial(total as u128, n as u128, BRUTE_FORCE_LIMIT);
    if subsets > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            subsets,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    let g = grid.levels();
    let candidates: Vec<Color> = (0..total)
        .map(|k| grid.color([k / (g * g), (k / g) % g, k % g]))
        .collect();

    struct Search<'a> {
        candidates: &'a [Color],
        n: usize,
        chosen: Vec<usize>,
        best: Option<(u16, Vec<usize>)>,
    }

    impl Search<'_> {
        fn visit(&mut self, from: usize, partial_min: u16) {
            if self.chosen.len() == self.n {
                if self.best.as_ref().is_none_or(|b| partial_min > b.0) {
                    self.best = Some((partial_min, self.chosen.clone()));
                }
                return;
            }
            let remaining = self.n - self.chosen.len();
            for k in from..=self.candidates.len() - remaining {
                let c = self.candidates[k];
                let m = self
                    .chosen
                    .iter()
                    .map(|&j| color_diff(self.candidates[j], c))
                    .fold(partial_min, u16::min);
                if self.best.as_ref().is_some_and(|b| m <= b.0) {
                    continue;
                }
                self.chosen.push(k);
                self.visit(k + 1, m);
                self.chosen.pop();
            }
        }
    }

    let mut search = Search {
        candidates: &candidates,
        n,
        chosen: Vec::with_capacity(n),
        best: None,
    };
    search.visit(0, u16::MAX);
    let (min, idx) = search.best.expect("n <= candidates guarantees a subset");
    let palette = Palette::new(
        format!("bf{n}-g{grid_levels}"),
        idx.into_iter().map(|k| candidates[k]).collect(),
    )?;
    Ok(ConstructionResult {
        palette,
        achieved_min_diff: min,
        restarts_used: 1,
        improving_moves: 0,
    })
}
