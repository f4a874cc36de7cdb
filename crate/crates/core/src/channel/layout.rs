//! Office floor plan: offices, doors, sensors and wall-crossing counts.
//!
//! Offices are equal squares packed contiguously along the length axis in one
//! row (against `y = 0`) or two rows (against `y = 0` and `y = width`). The
//! strip left between the rows and the opposite building wall is the corridor.
//! Each office has a single door centered on its corridor-facing wall and the
//! sensors sit on the corridor centerline.

use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutConfig {
    pub length_m: f64,
    pub width_m: f64,
    pub office_size_m: f64,
    pub num_offices: usize,
    pub rows: usize,
    pub num_sensors: usize,
    pub door_width_m: f64,
}

impl Default for LayoutConfig {
    /// 60 m x 9 m floor, fifteen 4 m offices in one row, three sensors.
    fn default() -> Self {
        Self {
            length_m: 60.0,
            width_m: 9.0,
            office_size_m: 4.0,
            num_offices: 15,
            rows: 1,
            num_sensors: 3,
            door_width_m: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OfficeLayout {
    pub length_m: f64,
    pub width_m: f64,
    pub office_size_m: f64,
    pub door_width_m: f64,
    pub rows: usize,
    pub office_centers: Vec<Point>,
    pub sensor_positions: Vec<Point>,
}

/// Number of obstacles crossed by a straight path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Obstacles {
    pub walls: u32,
    pub doors: u32,
}

/// Lays out `num_offices` offices in `rows` rows and spreads the sensors
/// uniformly along the corridor centerline, inset by half an office.
pub fn build_layout(config: &LayoutConfig) -> Result<OfficeLayout> {
    let LayoutConfig {
        length_m,
        width_m,
        office_size_m: size,
        num_offices,
        rows,
        num_sensors,
        door_width_m,
    } = *config;

    let finite = [length_m, width_m, size, door_width_m].iter().all(|v| v.is_finite());
    if !finite || length_m <= 0.0 || width_m <= 0.0 || size <= 0.0 {
        return Err(Error::Geometry(format!(
            "dimensions must be positive and finite (length {length_m}, width {width_m}, office {size})"
        )));
    }
    if !(1..=2).contains(&rows) {
        return Err(Error::Geometry(format!("rows must be 1 or 2, got {rows}")));
    }
    if num_offices == 0 || num_offices % rows != 0 {
        return Err(Error::Geometry(format!(
            "{num_offices} offices cannot be split evenly into {rows} rows"
        )));
    }
    if num_sensors == 0 {
        return Err(Error::Geometry("at least one sensor is required".into()));
    }
    let per_row = num_offices / rows;
    if per_row as f64 * size > length_m {
        return Err(Error::Geometry(format!(
            "{per_row} offices of {size} m do not fit along {length_m} m"
        )));
    }
    if rows as f64 * size >= width_m {
        return Err(Error::Geometry(format!(
            "{rows} rows of {size} m offices leave no corridor in {width_m} m"
        )));
    }
    if !(0.0..size).contains(&door_width_m) {
        return Err(Error::Geometry(format!(
            "door width {door_width_m} m must lie in [0, {size})"
        )));
    }

    let mut office_centers = Vec::with_capacity(num_offices);
    for row in 0..rows {
        let y = row_bounds(row, size, width_m).0 + size / 2.0;
        office_centers.extend((0..per_row).map(|j| Point::new((j as f64 + 0.5) * size, y)));
    }

    let sensor_y = if rows == 1 {
        (size + width_m) / 2.0
    } else {
        width_m / 2.0
    };
    let sensor_positions = if num_sensors == 1 {
        alloc::vec![Point::new(length_m / 2.0, sensor_y)]
    } else {
        let spacing = (length_m - size) / (num_sensors - 1) as f64;
        (0..num_sensors)
            .map(|i| Point::new(size / 2.0 + i as f64 * spacing, sensor_y))
            .collect()
    };

    Ok(OfficeLayout {
        length_m,
        width_m,
        office_size_m: size,
        door_width_m,
        rows,
        office_centers,
        sensor_positions,
    })
}

/// `(bottom, top)` of the office strip for `row`.
fn row_bounds(row: usize, size: f64, width: f64) -> (f64, f64) {
    if row == 0 {
        (0.0, size)
    } else {
        (width - size, width)
    }
}

impl OfficeLayout {
    pub fn num_offices(&self) -> usize {
        self.office_centers.len()
    }

    pub fn num_sensors(&self) -> usize {
        self.sensor_positions.len()
    }

    pub fn offices_per_row(&self) -> usize {
        self.num_offices() / self.rows
    }

    /// y coordinate of the corridor-facing wall of `row`.
    pub fn corridor_wall_y(&self, row: usize) -> f64 {
        if row == 0 {
            self.office_size_m
        } else {
            self.width_m - self.office_size_m
        }
    }

    /// y coordinate of the building wall behind `row`.
    pub fn back_wall_y(&self, row: usize) -> f64 {
        if row == 0 {
            0.0
        } else {
            self.width_m
        }
    }

    /// Counts walls and doors met by the closed segment `from`-`to`.
    ///
    /// Walls are the office partitions (including the end walls of each row),
    /// the back wall, and the corridor wall pieces between doors. Doors are
    /// the open gaps in the corridor wall. A segment running along a wall does
    /// not cross it; a segment through a wall endpoint counts that wall.
    pub fn count_obstacles(&self, from: Point, to: Point) -> Obstacles {
        // Canonical orientation keeps the result symmetric bit for bit.
        let (p, q) = if (from.x, from.y) <= (to.x, to.y) {
            (from, to)
        } else {
            (to, from)
        };
        let (dx, dy) = (q.x - p.x, q.y - p.y);
        let size = self.office_size_m;
        let per_row = self.offices_per_row();
        let span = per_row as f64 * size;
        let half_door = self.door_width_m / 2.0;

        let mut hits = Obstacles::default();
        for row in 0..self.rows {
            let (y0, y1) = row_bounds(row, size, self.width_m);
            if dx != 0.0 {
                for j in 0..=per_row {
                    let t = (j as f64 * size - p.x) / dx;
                    if (0.0..=1.0).contains(&t) {
                        let y = p.y + t * dy;
                        if (y0..=y1).contains(&y) {
                            hits.walls += 1;
                        }
                    }
                }
            }
            if dy != 0.0 {
                for (line, has_doors) in [(self.back_wall_y(row), false), (self.corridor_wall_y(row), true)] {
                    let t = (line - p.y) / dy;
                    if !(0.0..=1.0).contains(&t) {
                        continue;
                    }
                    let x = p.x + t * dx;
                    if !(0.0..=span).contains(&x) {
                        continue;
                    }
                    let office = libm::floor(x / size).clamp(0.0, (per_row - 1) as f64);
                    let center = (office + 0.5) * size;
                    if has_doors && libm::fabs(x - center) < half_door {
                        hits.doors += 1;
                    } else {
                        hits.walls += 1;
                    }
                }
            }
        }
        hits
    }
}
