use serde::{Deserialize, Serialize};

use super::UiError;

/// Axis-aligned rectangle in integer device pixels.
///
/// `left`/`top` are inclusive and `right`/`bottom` exclusive, so a point
/// `(x, y)` lies inside when `left <= x < right && top <= y < bottom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRect", into = "RawRect")]
pub struct Rect {
    left: i32,
    top: i32,
    right: i32,
    bottom: i32,
}

#[derive(Serialize, Deserialize)]
struct RawRect {
    l: i32,
    t: i32,
    r: i32,
    b: i32,
}

impl TryFrom<RawRect> for Rect {
    type Error = UiError;

    fn try_from(raw: RawRect) -> Result<Self, Self::Error> {
        Rect::new(raw.l, raw.t, raw.r, raw.b)
    }
}

impl From<Rect> for RawRect {
    fn from(r: Rect) -> Self {
        RawRect { l: r.left, t: r.top, r: r.right, b: r.bottom }
    }
}

impl Rect {
    pub fn new(left: i32, top: i32, right: i32, bottom: i32) -> Result<Self, UiError> {
        if left > right || top > bottom {
            return Err(UiError::InvalidRect { left, top, right, bottom });
        }
        Ok(Rect { left, top, right, bottom })
    }

    /// Rectangle anchored at the origin.
    pub fn sized(width: i32, height: i32) -> Result<Self, UiError> {
        Rect::new(0, 0, width, height)
    }

    pub fn left(&self) -> i32 {
        self.left
    }

    pub fn top(&self) -> i32 {
        self.top
    }

    pub fn right(&self) -> i32 {
        self.right
    }

    pub fn bottom(&self) -> i32 {
        self.bottom
    }

    pub fn width(&self) -> i32 {
        self.right - self.left
    }

    pub fn height(&self) -> i32 {
        self.bottom - self.top
    }

    pub fn area(&self) -> i64 {
        i64::from(self.width()) * i64::from(self.height())
    }

    pub fn is_empty(&self) -> bool {
        self.area() == 0
    }

    pub fn contains_point(&self, x: i32, y: i32) -> bool {
        self.left <= x && x < self.right && self.top <= y && y < self.bottom
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.left <= other.left
            && self.top <= other.top
            && other.right <= self.right
            && other.bottom <= self.bottom
    }

    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let left = self.left.max(other.left);
        let top = self.top.max(other.top);
        let right = self.right.min(other.right);
        let bottom = self.bottom.min(other.bottom);
        (left < right && top < bottom).then_some(Rect { left, top, right, bottom })
    }

    /// Center point, rounded towards the top-left.
    pub fn center(&self) -> (i32, i32) {
        (
            self.left + self.width() / 2,
            self.top + self.height() / 2,
        )
    }

    pub fn translate(&self, dx: i32, dy: i32) -> Rect {
        Rect {
            left: self.left + dx,
            top: self.top + dy,
            right: self.right + dx,
            bottom: self.bottom + dy,
        }
    }

    /// Percentage of this rectangle's area that falls inside `viewport`,
    /// in `[0, 100]`. Empty rectangles report 0.
    pub fn visible_percent(&self, viewport: &Rect) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let visible = self.intersection(viewport).map_or(0, |r| r.area());
        visible as f64 * 100.0 / self.area() as f64
    }

    /// Integer form of `visible_percent(viewport) >= threshold`.
    pub fn visible_at_least(&self, viewport: &Rect, threshold: u8) -> bool {
        if self.is_empty() {
            return false;
        }
        let visible = self.intersection(viewport).map_or(0, |r| r.area());
        visible * 100 >= i64::from(threshold) * self.area()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_bounds() {
        assert!(Rect::new(10, 0, 5, 5).is_err());
        assert!(Rect::new(0, 10, 5, 5).is_err());
        assert!(Rect::new(3, 3, 3, 3).is_ok());
    }

    #[test]
    fn half_open_containment() {
        let r = Rect::new(0, 0, 10, 10).unwrap();
        assert!(r.contains_point(0, 0));
        assert!(r.contains_point(9, 9));
        assert!(!r.contains_point(10, 5));
        assert!(!r.contains_point(5, 10));
    }

    #[test]
    fn half_off_screen_visibility() {
        let screen = Rect::sized(100, 100).unwrap();
        let node = Rect::new(0, 50, 100, 150).unwrap();
        assert_eq!(node.visible_percent(&screen), 50.0);
        assert!(!node.visible_at_least(&screen, 60));
        assert!(node.visible_at_least(&screen, 40));
        assert!(node.visible_at_least(&screen, 50));
    }

    #[test]
    fn json_uses_short_keys() {
        let r = Rect::new(1, 2, 3, 4).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"l":1,"t":2,"r":3,"b":4}"#);
        assert!(serde_json::from_str::<Rect>(r#"{"l":5,"t":2,"r":3,"b":4}"#).is_err());
    }
}
