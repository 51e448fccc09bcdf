//! Partition of the movement area into equal rectangular locations.
//!
//! Cells are numbered row-major starting at the origin corner: cell
//! `row * cols + col` spans columns along x and rows along y. Cells are
//! half-open `[min, max)` on both axes except along the outer edges of the
//! area, which are closed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaBounds {
    pub width: f64,
    pub height: f64,
}

impl AreaBounds {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        let area = Self { width, height };
        area.validate()?;
        Ok(area)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(self.width) && ok(self.height) {
            Ok(())
        } else {
            Err(Error::InvalidArea {
                width: self.width,
                height: self.height,
            })
        }
    }

    pub fn contains(&self, p: Point2D) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    pub fn diagonal(&self) -> f64 {
        self.width.hypot(self.height)
    }

    /// Uniform point over the whole area.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2D {
        Point2D::new(
            self.width * rng.random::<f64>(),
            self.height * rng.random::<f64>(),
        )
    }
}

/// Axis-aligned rectangle, inclusive of both corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Rect {
    pub fn contains(&self, p: Point2D) -> bool {
        (self.min_x..=self.max_x).contains(&p.x) && (self.min_y..=self.max_y).contains(&p.y)
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }
}

pub type CellId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub id: CellId,
    pub bounds: Rect,
    pub center: Point2D,
}

impl Cell {
    fn new(id: CellId, bounds: Rect) -> Self {
        let center = Point2D::new(
            (bounds.min_x + bounds.max_x) / 2.0,
            (bounds.min_y + bounds.max_y) / 2.0,
        );
        Self { id, bounds, center }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocationClass {
    Home,
    Neighbouring,
    Visiting,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocationMap {
    cells: Vec<Cell>,
    rows: usize,
    cols: usize,
    area: AreaBounds,
}

/// Chooses the `(rows, cols)` factor pair of `n` whose cells are closest to
/// square, preferring `cols >= rows` on ties.
pub fn grid_shape(area: AreaBounds, n: usize) -> (usize, usize) {
    let mut best: Option<(usize, usize, f64)> = None;
    for rows in 1..=n {
        if !n.is_multiple_of(rows) {
            continue;
        }
        let cols = n / rows;
        let skew = (area.width / cols as f64 - area.height / rows as f64).abs();
        let better = match best {
            None => true,
            Some((br, bc, bs)) => {
                let tol = 1e-12 * bs.max(skew).max(1.0);
                if (skew - bs).abs() <= tol {
                    cols >= rows && bc < br
                } else {
                    skew < bs
                }
            }
        };
        if better {
            best = Some((rows, cols, skew));
        }
    }
    let (rows, cols, _) = best.expect("n >= 1 always has the factor pair (1, n)");
    (rows, cols)
}

/// Builds the shared location grid for `no_of_locations` cells.
pub fn build_grid(area: AreaBounds, no_of_locations: usize) -> Result<LocationMap> {
    area.validate()?;
    if no_of_locations < 2 {
        return Err(Error::TooFewLocations(no_of_locations));
    }
    let (rows, cols) = grid_shape(area, no_of_locations);
    LocationMap::with_shape(area, rows, cols)
}

impl LocationMap {
    /// Grid with an explicit shape. Used when reloading a locations file.
    pub fn with_shape(area: AreaBounds, rows: usize, cols: usize) -> Result<Self> {
        area.validate()?;
        if rows * cols < 2 {
            return Err(Error::TooFewLocations(rows * cols));
        }
        let edge = |extent: f64, i: usize, n: usize| extent * i as f64 / n as f64;
        let mut cells = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let bounds = Rect {
                    min_x: edge(area.width, c, cols),
                    min_y: edge(area.height, r, rows),
                    max_x: edge(area.width, c + 1, cols),
                    max_y: edge(area.height, r + 1, rows),
                };
                cells.push(Cell::new(r * cols + c, bounds));
            }
        }
        Ok(Self {
            cells,
            rows,
            cols,
            area,
        })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn area(&self) -> AreaBounds {
        self.area
    }

    /// Size of every cell as `(width, height)`.
    pub fn cell_size(&self) -> (f64, f64) {
        (
            self.area.width / self.cols as f64,
            self.area.height / self.rows as f64,
        )
    }

    pub fn center_distance(&self, a: CellId, b: CellId) -> f64 {
        self.cells[a].center.distance(self.cells[b].center)
    }

    /// Returns the cell owning `p` under the half-open boundary rule.
    pub fn cell_of(&self, p: Point2D) -> Result<CellId> {
        if !p.x.is_finite() || !p.y.is_finite() || !self.area.contains(p) {
            return Err(Error::PointOutsideArea { x: p.x, y: p.y });
        }
        let col = axis_index(p.x, self.area.width, self.cols, |i| {
            let b = self.cells[i].bounds;
            (b.min_x, b.max_x)
        });
        let row = axis_index(p.y, self.area.height, self.rows, |i| {
            let b = self.cells[i * self.cols].bounds;
            (b.min_y, b.max_y)
        });
        Ok(row * self.cols + col)
    }

    /// Per-cell classification relative to `home`.
    pub fn classify_locations(&self, home: CellId, limit: f64) -> Vec<LocationClass> {
        (0..self.cells.len())
            .map(|c| {
                if c == home {
                    LocationClass::Home
                } else if self.center_distance(home, c) <= limit {
                    LocationClass::Neighbouring
                } else {
                    LocationClass::Visiting
                }
            })
            .collect()
    }

    /// Renders the locations file.
    pub fn to_locations_text(&self) -> String {
        let mut out = format!(
            "# swim-locations v1 rows={} cols={}\n",
            self.rows, self.cols
        );
        for cell in &self.cells {
            let b = cell.bounds;
            writeln!(
                out,
                "{},{:.6},{:.6},{:.6},{:.6}",
                cell.id, b.min_x, b.min_y, b.max_x, b.max_y
            )
            .expect("writing to a String cannot fail");
        }
        out
    }

    pub fn write_locations_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_locations_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read_locations_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_locations_text(&text).map_err(|reason| Error::LocationsFormat {
            path: path.to_path_buf(),
            reason,
        })
    }

    /// Parses a locations file. The outer extent is taken from the last cell
    /// and the grid is rebuilt from the header shape; every data line must
    /// match the rebuilt grid's rendering exactly.
    pub fn parse_locations_text(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty file")?;
        let (rows, cols) = parse_header(header)?;
        let data: Vec<&str> = lines.filter(|l| !l.trim().is_empty()).collect();
        if data.len() != rows * cols {
            return Err(format!(
                "expected {} cells, found {}",
                rows * cols,
                data.len()
            ));
        }
        let last = data[data.len() - 1];
        let fields: Vec<&str> = last.split(',').collect();
        if fields.len() != 5 {
            return Err(format!("bad cell line `{last}`"));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| format!("bad number `{s}`: {e}"))
        };
        let area = AreaBounds {
            width: parse(fields[3])?,
            height: parse(fields[4])?,
        };
        let map = Self::with_shape(area, rows, cols).map_err(|e| e.to_string())?;
        let rendered = map.to_locations_text();
        for (i, (expected, found)) in rendered.lines().skip(1).zip(&data).enumerate() {
            if expected != found.trim() {
                return Err(format!("cell line {i} is `{found}`, expected `{expected}`"));
            }
        }
        Ok(map)
    }
}

fn parse_header(header: &str) -> std::result::Result<(usize, usize), String> {
    let rest = header
        .strip_prefix("# swim-locations v1 ")
        .ok_or_else(|| format!("bad header `{header}`"))?;
    let mut rows = None;
    let mut cols = None;
    for part in rest.split_whitespace() {
        match part.split_once('=') {
            Some(("rows", v)) => rows = v.parse().ok(),
            Some(("cols", v)) => cols = v.parse().ok(),
            _ => return Err(format!("bad header field `{part}`")),
        }
    }
    match (rows, cols) {
        (Some(r), Some(c)) if r > 0 && c > 0 => Ok((r, c)),
        _ => Err(format!("bad header `{header}`")),
    }
}

/// Index along one axis, corrected against the actual cell bounds so that
/// the floating point division never disagrees with `Rect` membership.
fn axis_index(v: f64, extent: f64, n: usize, bounds: impl Fn(usize) -> (f64, f64)) -> usize {
    let mut i = ((v / extent) * n as f64).floor() as usize;
    i = i.min(n - 1);
    loop {
        let (lo, hi) = bounds(i);
        if v < lo && i > 0 {
            i -= 1;
        } else if v >= hi && i + 1 < n {
            i += 1;
        } else {
            return i;
        }
    }
}

pub fn random_point_in_cell<R: Rng + ?Sized>(cell: &Cell, rng: &mut R) -> Point2D {
    let b = cell.bounds;
    let x = b.min_x + b.width() * rng.random::<f64>();
    let y = b.min_y + b.height() * rng.random::<f64>();
    Point2D::new(x.min(b.max_x), y.min(b.max_y))
}
