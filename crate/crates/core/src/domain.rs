//! Planar domains, their masked uniform grids, and ball geometry.
//!
//! A grid cell is inside the domain iff its center satisfies the region
//! predicate. For every inside cell whose axis neighbor is outside, the grid
//! also records the fraction `θ ∈ (0, 1]` of the center-to-center segment that
//! lies inside the region; the Laplacian uses it to place the Dirichlet
//! condition on the true boundary rather than at the outside cell center.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use num_traits::Float;

use crate::error::{Error, Result};

/// Smallest admissible resolution.
pub const MIN_RESOLUTION: usize = 16;

/// Boundary fractions are clamped from below to keep the operator diagonal bounded.
pub const MIN_BOUNDARY_FRACTION: f64 = 1e-3;

const BISECTION_STEPS: usize = 60;

/// Axis directions in stencil order: +x, -x, +y, -y.
pub const DIRECTIONS: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Disk,
    Ellipse,
    Rectangle,
    LShape,
    Annulus,
    Polygon,
}

impl DomainKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DomainKind::Disk => "disk",
            DomainKind::Ellipse => "ellipse",
            DomainKind::Rectangle => "rectangle",
            DomainKind::LShape => "lshape",
            DomainKind::Annulus => "annulus",
            DomainKind::Polygon => "polygon",
        }
    }
}

impl FromStr for DomainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "disk" | "ball" => DomainKind::Disk,
            "ellipse" => DomainKind::Ellipse,
            "rectangle" | "rect" => DomainKind::Rectangle,
            "square" => DomainKind::Rectangle,
            "lshape" | "l-shape" | "l" => DomainKind::LShape,
            "annulus" => DomainKind::Annulus,
            "polygon" => DomainKind::Polygon,
            _ => return Err(Error::InvalidShape("unknown domain kind")),
        })
    }
}

/// A bounded planar region.
///
/// Disks, ellipses and annuli are centered at the origin; rectangles and the
/// L-shape have their lower-left corner at the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Disk { radius: f64 },
    Ellipse { semi_x: f64, semi_y: f64 },
    Rectangle { width: f64, height: f64 },
    /// `[0, side]²` minus the top-right quarter `[side/2, side]²`.
    LShape { side: f64 },
    Annulus { inner: f64, outer: f64 },
    /// Simple polygon, vertices in either orientation.
    Polygon { vertices: Vec<[f64; 2]> },
}

/// A validated domain plus an optional display name.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    shape: Shape,
    name: Option<String>,
}

fn positive(x: f64, what: &'static str) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::InvalidShape(what))
    }
}

impl DomainSpec {
    pub fn new(shape: Shape) -> Result<Self> {
        match &shape {
            Shape::Disk { radius } => {
                positive(*radius, "disk radius must be positive")?;
            }
            Shape::Ellipse { semi_x, semi_y } => {
                positive(*semi_x, "ellipse semi-axes must be positive")?;
                positive(*semi_y, "ellipse semi-axes must be positive")?;
            }
            Shape::Rectangle { width, height } => {
                positive(*width, "rectangle sides must be positive")?;
                positive(*height, "rectangle sides must be positive")?;
            }
            Shape::LShape { side } => {
                positive(*side, "L-shape side must be positive")?;
            }
            Shape::Annulus { inner, outer } => {
                positive(*inner, "annulus radii must be positive")?;
                positive(*outer, "annulus radii must be positive")?;
                if inner >= outer {
                    return Err(Error::DegenerateDomain);
                }
            }
            Shape::Polygon { vertices } => validate_polygon(vertices)?,
        }
        Ok(DomainSpec { shape, name: None })
    }

    /// Builds a spec from a kind and its flat parameter list.
    ///
    /// | kind      | params                      |
    /// |-----------|-----------------------------|
    /// | disk      | radius                      |
    /// | ellipse   | semi_x, semi_y              |
    /// | rectangle | width, height (or one side) |
    /// | lshape    | side (default 1)            |
    /// | annulus   | inner, outer                |
    /// | polygon   | x0, y0, x1, y1, ...         |
    pub fn from_params(kind: DomainKind, params: &[f64]) -> Result<Self> {
        let arity = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidShape("wrong number of parameters for domain kind"))
            }
        };
        let shape = match kind {
            DomainKind::Disk => {
                arity(1)?;
                Shape::Disk { radius: params[0] }
            }
            DomainKind::Ellipse => {
                arity(2)?;
                Shape::Ellipse { semi_x: params[0], semi_y: params[1] }
            }
            DomainKind::Rectangle => match params {
                [s] => Shape::Rectangle { width: *s, height: *s },
                [w, h] => Shape::Rectangle { width: *w, height: *h },
                _ => return Err(Error::InvalidShape("rectangle takes one or two sides")),
            },
            DomainKind::LShape => match params {
                [] => Shape::LShape { side: 1.0 },
                [s] => Shape::LShape { side: *s },
                _ => return Err(Error::InvalidShape("lshape takes one side length")),
            },
            DomainKind::Annulus => {
                arity(2)?;
                Shape::Annulus { inner: params[0], outer: params[1] }
            }
            DomainKind::Polygon => {
                if params.len() % 2 != 0 {
                    return Err(Error::InvalidShape("polygon needs an even number of coordinates"));
                }
                let vertices = params.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
                Shape::Polygon { vertices }
            }
        };
        DomainSpec::new(shape)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn kind(&self) -> DomainKind {
        match self.shape {
            Shape::Disk { .. } => DomainKind::Disk,
            Shape::Ellipse { .. } => DomainKind::Ellipse,
            Shape::Rectangle { .. } => DomainKind::Rectangle,
            Shape::LShape { .. } => DomainKind::LShape,
            Shape::Annulus { .. } => DomainKind::Annulus,
            Shape::Polygon { .. } => DomainKind::Polygon,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Disk { radius } => vec![*radius],
            Shape::Ellipse { semi_x, semi_y } => vec![*semi_x, *semi_y],
            Shape::Rectangle { width, height } => vec![*width, *height],
            Shape::LShape { side } => vec![*side],
            Shape::Annulus { inner, outer } => vec![*inner, *outer],
            Shape::Polygon { vertices } => vertices.iter().flat_map(|v| [v[0], v[1]]).collect(),
        }
    }

    /// Explicit name if one was given, otherwise `kind:p0,p1,...`.
    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => alloc::format!("{self}"),
        }
    }

    /// True for shapes that are exactly a disk, where the ball comparisons
    /// are equalities.
    pub fn is_ball(&self) -> bool {
        match self.shape {
            Shape::Disk { .. } => true,
            Shape::Ellipse { semi_x, semi_y } => semi_x == semi_y,
            _ => false,
        }
    }

    /// Uniform scaling of all lengths.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        positive(factor, "scale factor must be positive")?;
        let shape = match &self.shape {
            Shape::Disk { radius } => Shape::Disk { radius: radius * factor },
            Shape::Ellipse { semi_x, semi_y } => {
                Shape::Ellipse { semi_x: semi_x * factor, semi_y: semi_y * factor }
            }
            Shape::Rectangle { width, height } => {
                Shape::Rectangle { width: width * factor, height: height * factor }
            }
            Shape::LShape { side } => Shape::LShape { side: side * factor },
            Shape::Annulus { inner, outer } => {
                Shape::Annulus { inner: inner * factor, outer: outer * factor }
            }
            Shape::Polygon { vertices } => Shape::Polygon {
                vertices: vertices.iter().map(|v| [v[0] * factor, v[1] * factor]).collect(),
            },
        };
        Ok(DomainSpec { shape, name: self.name.clone() })
    }

    /// Region predicate (open set).
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match &self.shape {
            Shape::Disk { radius } => x * x + y * y < radius * radius,
            Shape::Ellipse { semi_x, semi_y } => {
                let (a, b) = (x / semi_x, y / semi_y);
                a * a + b * b < 1.0
            }
            Shape::Rectangle { width, height } => x > 0.0 && x < *width && y > 0.0 && y < *height,
            Shape::LShape { side } => {
                let half = 0.5 * side;
                x > 0.0 && x < *side && y > 0.0 && y < *side && !(x >= half && y >= half)
            }
            Shape::Annulus { inner, outer } => {
                let r2 = x * x + y * y;
                r2 > inner * inner && r2 < outer * outer
            }
            Shape::Polygon { vertices } => point_in_polygon(vertices, x, y),
        }
    }

    /// `[xmin, ymin, xmax, ymax]`.
    pub fn bbox(&self) -> [f64; 4] {
        match &self.shape {
            Shape::Disk { radius } => [-radius, -radius, *radius, *radius],
            Shape::Ellipse { semi_x, semi_y } => [-semi_x, -semi_y, *semi_x, *semi_y],
            Shape::Rectangle { width, height } => [0.0, 0.0, *width, *height],
            Shape::LShape { side } => [0.0, 0.0, *side, *side],
            Shape::Annulus { outer, .. } => [-outer, -outer, *outer, *outer],
            Shape::Polygon { vertices } => {
                let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
                for v in vertices {
                    b[0] = b[0].min(v[0]);
                    b[1] = b[1].min(v[1]);
                    b[2] = b[2].max(v[0]);
                    b[3] = b[3].max(v[1]);
                }
                b
            }
        }
    }

    /// Lebesgue measure of the continuum region.
    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Disk { radius } => PI * radius * radius,
            Shape::Ellipse { semi_x, semi_y } => PI * semi_x * semi_y,
            Shape::Rectangle { width, height } => width * height,
            Shape::LShape { side } => 0.75 * side * side,
            Shape::Annulus { inner, outer } => PI * (outer * outer - inner * inner),
            Shape::Polygon { vertices } => signed_area(vertices).abs(),
        }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().as_str())?;
        for (i, p) in self.params().iter().enumerate() {
            f.write_str(if i == 0 { ":" } else { "," })?;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for DomainSpec {
    type Err = Error;

    /// Parses `kind` or `kind:p0,p1,...`, e.g. `disk:1`, `rectangle:2,3`, `lshape`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = match s.split_once(':') {
            Some((k, r)) => (k, r),
            None => (s, ""),
        };
        let kind: DomainKind = kind.parse()?;
        let mut params = Vec::new();
        for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let v: f64 = tok.parse().map_err(|_| Error::InvalidShape("domain parameter is not a number"))?;
            params.push(v);
        }
        DomainSpec::from_params(kind, &params)
    }
}

fn signed_area(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    let mut acc = 0.0;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        acc += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * acc
}

fn point_in_polygon(v: &[[f64; 2]], x: f64, y: f64) -> bool {
    let mut inside = false;
    let n = v.len();
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (v[i], v[j]);
        if (pi[1] > y) != (pj[1] > y) {
            let xc = pj[0] + (y - pj[1]) * (pi[0] - pj[0]) / (pi[1] - pj[1]);
            if x < xc {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

fn segments_touch(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

fn validate_polygon(v: &[[f64; 2]]) -> Result<()> {
    if v.len() < 3 {
        return Err(Error::InvalidShape("polygon needs at least three vertices"));
    }
    if v.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(Error::InvalidShape("polygon vertex is not finite"));
    }
    let n = v.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_touch(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return Err(Error::InvalidShape("polygon edges intersect"));
            }
        }
    }
    if signed_area(v).abs() <= 0.0 {
        return Err(Error::InvalidShape("polygon has zero area"));
    }
    Ok(())
}

/// Masked uniform grid over a domain's bounding box.
#[derive(Debug, Clone)]
pub struct Grid {
    spec: DomainSpec,
    resolution: usize,
    origin: [f64; 2],
    spacing: f64,
    nx: usize,
    ny: usize,
    cell_of: Vec<u32>,
    cells: Vec<[u32; 2]>,
    neighbors: Vec<[u32; 4]>,
    fractions: Vec<[f64; 4]>,
}

impl Grid {
    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    /// Cells along the longer bounding-box side, as requested.
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn cell_measure(&self) -> f64 {
        self.spacing * self.spacing
    }

    /// Number of inside cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells along x and y of the full bounding grid.
    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    /// Lower-left corner of the bounding grid.
    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn is_inside(&self, i: usize, j: usize) -> bool {
        i < self.nx && j < self.ny && self.cell_of[j * self.nx + i] != NONE
    }

    /// Inside index of bounding-grid cell `(i, j)`.
    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.nx || j >= self.ny {
            return None;
        }
        match self.cell_of[j * self.nx + i] {
            NONE => None,
            k => Some(k as usize),
        }
    }

    pub fn cell_coords(&self, k: usize) -> (usize, usize) {
        let c = self.cells[k];
        (c[0] as usize, c[1] as usize)
    }

    pub fn cell_center(&self, k: usize) -> [f64; 2] {
        let (i, j) = self.cell_coords(k);
        self.center_of(i as isize, j as isize)
    }

    /// Center of bounding-grid cell `(i, j)`; indices may lie outside the box.
    pub fn center_of(&self, i: isize, j: isize) -> [f64; 2] {
        [
            self.origin[0] + (i as f64 + 0.5) * self.spacing,
            self.origin[1] + (j as f64 + 0.5) * self.spacing,
        ]
    }

    /// Inside neighbor of cell `k` in direction `dir` (see [`DIRECTIONS`]).
    pub fn neighbor(&self, k: usize, dir: usize) -> Option<usize> {
        match self.neighbors[k][dir] {
            NONE => None,
            m => Some(m as usize),
        }
    }

    /// Fraction of the segment toward the neighbor in direction `dir` that
    /// lies inside the region: 1 for inside neighbors.
    pub fn boundary_fraction(&self, k: usize, dir: usize) -> f64 {
        self.fractions[k][dir]
    }

    /// True if any axis neighbor of `k` is outside.
    pub fn touches_boundary(&self, k: usize) -> bool {
        self.neighbors[k].contains(&NONE)
    }

    /// Exact measure of the continuum domain.
    pub fn domain_area(&self) -> f64 {
        self.spec.area()
    }

    /// Distance in cells from `k` to the nearest outside cell (4-connected
    /// graph distance, 1 for cells touching the boundary).
    pub fn boundary_depth(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::new();
        for k in 0..self.len() {
            if self.touches_boundary(k) {
                depth[k] = 1;
                queue.push_back(k);
            }
        }
        while let Some(k) = queue.pop_front() {
            for dir in 0..4 {
                if let Some(m) = self.neighbor(k, dir) {
                    if depth[m] == usize::MAX {
                        depth[m] = depth[k] + 1;
                        queue.push_back(m);
                    }
                }
            }
        }
        depth
    }

    fn boundary_fraction_towards(&self, k: usize, dir: usize) -> f64 {
        let c = self.cell_center(k);
        let (dx, dy) = DIRECTIONS[dir];
        let step = [dx as f64 * self.spacing, dy as f64 * self.spacing];
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if self.spec.contains(c[0] + mid * step[0], c[1] + mid * step[1]) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).max(MIN_BOUNDARY_FRACTION)
    }
}

/// Discretizes `spec` with spacing `max bbox side / resolution`.
pub fn build_grid(spec: &DomainSpec, resolution: usize) -> Result<Grid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidResolution(resolution));
    }
    let [x0, y0, x1, y1] = spec.bbox();
    let (w, h) = (x1 - x0, y1 - y0);
    let spacing = w.max(h) / resolution as f64;
    let nx = ((w / spacing) - 1e-9).ceil().max(1.0) as usize;
    let ny = ((h / spacing) - 1e-9).ceil().max(1.0) as usize;
    let origin = [
        0.5 * (x0 + x1) - 0.5 * nx as f64 * spacing,
        0.5 * (y0 + y1) - 0.5 * ny as f64 * spacing,
    ];

    let mut cell_of = vec![NONE; nx * ny];
    let mut cells = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let x = origin[0] + (i as f64 + 0.5) * spacing;
            let y = origin[1] + (j as f64 + 0.5) * spacing;
            if spec.contains(x, y) {
                cell_of[j * nx + i] = cells.len() as u32;
                cells.push([i as u32, j as u32]);
            }
        }
    }
    if cells.is_empty() {
        return Err(Error::DegenerateDomain);
    }

    let neighbors: Vec<[u32; 4]> = cells
        .iter()
        .map(|&[i, j]| {
            let mut nb = [NONE; 4];
            for (d, &(dx, dy)) in DIRECTIONS.iter().enumerate() {
                let (a, b) = (i as isize + dx, j as isize + dy);
                if a >= 0 && b >= 0 && (a as usize) < nx && (b as usize) < ny {
                    nb[d] = cell_of[b as usize * nx + a as usize];
                }
            }
            nb
        })
        .collect();

    let mut grid = Grid {
        spec: spec.clone(),
        resolution,
        origin,
        spacing,
        nx,
        ny,
        cell_of,
        cells,
        neighbors,
        fractions: Vec::new(),
    };
    let fractions = (0..grid.len())
        .map(|k| {
            let mut f = [1.0; 4];
            for (d, slot) in f.iter_mut().enumerate() {
                if grid.neighbors[k][d] == NONE {
                    *slot = grid.boundary_fraction_towards(k, d);
                }
            }
            f
        })
        .collect();
    grid.fractions = fractions;

    let components = count_components(&grid);
    if components != 1 {
        return Err(Error::DisconnectedMask { components });
    }
    Ok(grid)
}

fn count_components(grid: &Grid) -> usize {
    let mut seen = vec![false; grid.len()];
    let mut components = 0;
    let mut stack = Vec::new();
    for start in 0..grid.len() {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(k) = stack.pop() {
            for d in 0..4 {
                if let Some(m) = grid.neighbor(k, d) {
                    if !seen[m] {
                        seen[m] = true;
                        stack.push(m);
                    }
                }
            }
        }
    }
    components
}

/// `inside_count · h²`.
pub fn volume(grid: &Grid) -> f64 {
    grid.len() as f64 * grid.cell_measure()
}

/// Volume `ω_n` of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1"));
    }
    // ω_n = ω_{n-2} · 2π/n, seeded with ω_0 = 1, ω_1 = 2.
    let mut w = if n % 2 == 0 { 1.0 } else { 2.0 };
    let mut m = if n % 2 == 0 { 2 } else { 3 };
    while m <= n {
        w *= 2.0 * PI / m as f64;
        m += 2;
    }
    Ok(w)
}

/// Radius of the ball with the given volume.
pub fn schwarz_radius(volume: f64, n: usize) -> Result<f64> {
    if !(volume.is_finite() && volume > 0.0) {
        return Err(Error::InvalidArgument("volume must be positive"));
    }
    Ok((volume / unit_ball_volume(n)?).powf(1.0 / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn disk(r: f64) -> DomainSpec {
        DomainSpec::new(Shape::Disk { radius: r }).unwrap()
    }

    #[test]
    fn unit_square_is_fully_inside() {
        let sq = DomainSpec::new(Shape::Rectangle { width: 1.0, height: 1.0 }).unwrap();
        let g = build_grid(&sq, 64).unwrap();
        assert_eq!(g.shape(), (64, 64));
        assert_eq!(g.len(), 64 * 64);
        assert_eq!(volume(&g), 1.0);
        for k in 0..g.len() {
            for d in 0..4 {
                if g.neighbor(k, d).is_none() {
                    assert_relative_eq!(g.boundary_fraction(k, d), 0.5, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn aligned_rectangle_and_lshape_volumes() {
        let r = DomainSpec::from_params(DomainKind::Rectangle, &[2.0, 3.0]).unwrap();
        assert_eq!(volume(&build_grid(&r, 48).unwrap()), 6.0);
        let l = DomainSpec::from_params(DomainKind::LShape, &[1.0]).unwrap();
        assert_eq!(volume(&build_grid(&l, 64).unwrap()), 0.75);
    }

    #[test]
    fn disk_volume_matches_center_counting() {
        let res = 128;
        let g = build_grid(&disk(1.0), res).unwrap();
        // independent count of cell centers inside the unit circle
        let h = 2.0 / res as f64;
        let mut count = 0usize;
        for i in 0..res {
            for j in 0..res {
                let x = -1.0 + (i as f64 + 0.5) * h;
                let y = -1.0 + (j as f64 + 0.5) * h;
                if x * x + y * y < 1.0 {
                    count += 1;
                }
            }
        }
        assert_eq!(g.len(), count);
        assert!((volume(&g) / PI - 1.0).abs() < 0.02);
    }

    #[test]
    fn degenerate_domains_are_rejected() {
        assert_eq!(
            DomainSpec::from_params(DomainKind::Annulus, &[1.0, 1.0]).unwrap_err(),
            Error::DegenerateDomain
        );
        assert_eq!(
            DomainSpec::from_params(DomainKind::Annulus, &[2.0, 1.0]).unwrap_err(),
            Error::DegenerateDomain
        );
        // no cell center of the 16-cell grid has radius in [0.999, 1)
        let thin = DomainSpec::from_params(DomainKind::Annulus, &[0.999, 1.0]).unwrap();
        assert_eq!(build_grid(&thin, 16).unwrap_err(), Error::DegenerateDomain);
        assert!(matches!(build_grid(&disk(1.0), 8), Err(Error::InvalidResolution(8))));
    }

    #[test]
    fn self_intersecting_polygon_is_rejected() {
        let bow = [0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0];
        assert!(DomainSpec::from_params(DomainKind::Polygon, &bow).is_err());
        let tri = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        let t = DomainSpec::from_params(DomainKind::Polygon, &tri).unwrap();
        assert_relative_eq!(t.area(), 0.5);
        assert!(t.contains(0.2, 0.2));
        assert!(!t.contains(0.6, 0.6));
    }

    #[test]
    fn disk_boundary_fractions_hit_the_circle() {
        let g = build_grid(&disk(1.0), 64).unwrap();
        let h = g.spacing();
        for k in 0..g.len() {
            let c = g.cell_center(k);
            for (d, &(dx, dy)) in DIRECTIONS.iter().enumerate() {
                if g.neighbor(k, d).is_none() {
                    let t = g.boundary_fraction(k, d);
                    let (x, y) = (c[0] + t * dx as f64 * h, c[1] + t * dy as f64 * h);
                    if t > MIN_BOUNDARY_FRACTION {
                        assert!(((x * x + y * y).sqrt() - 1.0).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn unit_ball_volumes() {
        assert_relative_eq!(unit_ball_volume(2).unwrap(), PI, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(3).unwrap(), 4.0 * PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(4).unwrap(), 4.934802200544679, max_relative = 1e-14);
        assert!(unit_ball_volume(0).is_err());
        // Γ-function form as an independent route
        for n in 1..12 {
            let nf = n as f64;
            let gamma_form = PI.powf(nf / 2.0) / libm::tgamma(nf / 2.0 + 1.0);
            assert_relative_eq!(unit_ball_volume(n).unwrap(), gamma_form, max_relative = 1e-13);
        }
    }

    #[test]
    fn schwarz_radii() {
        assert_relative_eq!(schwarz_radius(PI, 2).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(schwarz_radius(1.0, 2).unwrap(), 0.5641895835477563, max_relative = 1e-14);
        assert_relative_eq!(schwarz_radius(4.0 * PI / 3.0, 3).unwrap(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn disk_volume_error_halves_under_refinement() {
        // first-order boundary counting: the error shrinks as the grid is refined
        let e = |res| (volume(&build_grid(&disk(1.0), res).unwrap()) - PI).abs();
        let coarse = e(32) + e(34) + e(36);
        let fine = e(256) + e(258) + e(260);
        assert!(fine < 0.5 * coarse, "coarse {coarse}, fine {fine}");
        let g = build_grid(&disk(1.0), 256).unwrap();
        assert_relative_eq!(schwarz_radius(volume(&g), 2).unwrap(), 1.0, max_relative = 2e-3);
    }

    #[test]
    fn spec_round_trips_through_text() {
        for s in ["disk:1", "rectangle:2,3", "lshape:1", "annulus:0.5,1", "ellipse:1.4142,0.7071"] {
            let spec: DomainSpec = s.parse().unwrap();
            assert_eq!(alloc::format!("{spec}"), s);
        }
        assert!("hexagon:1".parse::<DomainSpec>().is_err());
    }
}
