use serde::{Deserialize, Serialize};

/// A drawn line from `(x0, y0)` to `(x1, y1)` in turtle coordinates.
/// Serialized as a 4-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Segment {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Segment {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Segment {
        Segment { x0, y0, x1, y1 }
    }

    pub fn length(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }
}

impl From<[f64; 4]> for Segment {
    fn from([x0, y0, x1, y1]: [f64; 4]) -> Segment {
        Segment { x0, y0, x1, y1 }
    }
}

impl From<Segment> for [f64; 4] {
    fn from(s: Segment) -> [f64; 4] {
        [s.x0, s.y0, s.x1, s.y1]
    }
}

/// Turtle position and pen. Heading is in degrees, 0 = north, clockwise
/// positive, always kept in `[0, 360)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TurtleState {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub pen_down: bool,
    pub segments: Vec<Segment>,
    clears: u64,
}

impl Default for TurtleState {
    fn default() -> Self {
        TurtleState {
            x: 0.0,
            y: 0.0,
            heading: 0.0,
            pen_down: true,
            segments: Vec::new(),
            clears: 0,
        }
    }
}

pub fn normalize_heading(degrees: f64) -> f64 {
    let h = degrees.rem_euclid(360.0);
    // rem_euclid of a tiny negative rounds up to 360.0
    if h >= 360.0 {
        0.0
    } else {
        h
    }
}

/// `(sin, cos)` of a heading, exact on the four compass points.
fn sin_cos_deg(degrees: f64) -> (f64, f64) {
    let h = normalize_heading(degrees);
    if h == 0.0 {
        (0.0, 1.0)
    } else if h == 90.0 {
        (1.0, 0.0)
    } else if h == 180.0 {
        (0.0, -1.0)
    } else if h == 270.0 {
        (-1.0, 0.0)
    } else {
        h.to_radians().sin_cos()
    }
}

impl TurtleState {
    /// Number of clearscreens executed so far.
    pub fn clear_count(&self) -> u64 {
        self.clears
    }

    pub fn forward(&mut self, distance: f64) {
        let (sin, cos) = sin_cos_deg(self.heading);
        let (x, y) = (self.x + distance * sin, self.y + distance * cos);
        self.move_to(x, y);
    }

    pub fn back(&mut self, distance: f64) {
        self.forward(-distance);
    }

    pub fn right(&mut self, degrees: f64) {
        self.heading = normalize_heading(self.heading + degrees);
    }

    pub fn left(&mut self, degrees: f64) {
        self.right(-degrees);
    }

    pub fn set_heading(&mut self, degrees: f64) {
        self.heading = normalize_heading(degrees);
    }

    /// Moves in a straight line, drawing when the pen is down.
    pub fn move_to(&mut self, x: f64, y: f64) {
        if self.pen_down {
            self.segments.push(Segment::new(self.x, self.y, x, y));
        }
        self.x = x;
        self.y = y;
    }

    pub fn home(&mut self) {
        self.move_to(0.0, 0.0);
        self.heading = 0.0;
    }

    pub fn clear_screen(&mut self) {
        self.segments.clear();
        self.x = 0.0;
        self.y = 0.0;
        self.heading = 0.0;
        self.pen_down = true;
        self.clears += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compass_moves_are_exact() {
        let mut t = TurtleState::default();
        for _ in 0..4 {
            t.forward(30.0);
            t.right(90.0);
        }
        assert_eq!(
            t.segments,
            vec![
                Segment::new(0.0, 0.0, 0.0, 30.0),
                Segment::new(0.0, 30.0, 30.0, 30.0),
                Segment::new(30.0, 30.0, 30.0, 0.0),
                Segment::new(30.0, 0.0, 0.0, 0.0),
            ]
        );
        assert_eq!(t.heading, 0.0);
    }

    #[test]
    fn heading_normalizes() {
        assert_eq!(normalize_heading(-90.0), 270.0);
        assert_eq!(normalize_heading(720.0), 0.0);
        assert_eq!(normalize_heading(-1e-20), 0.0);
    }

    #[test]
    fn pen_up_draws_nothing() {
        let mut t = TurtleState::default();
        t.pen_down = false;
        t.forward(10.0);
        assert!(t.segments.is_empty());
        assert_eq!(t.y, 10.0);
    }

    #[test]
    fn segment_serializes_as_array() {
        let s = Segment::new(0.0, 0.0, 0.0, 30.0);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0.0,0.0,0.0,30.0]");
    }
}
