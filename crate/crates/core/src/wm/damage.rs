use crate::kernel::Rect;

/// Screen rectangles needing repaint, with union semantics. Rectangles are
/// clipped to the screen; a rectangle inside an existing one is dropped and
/// existing ones inside a new one are pruned. Nothing else is merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DamageList {
    screen: Rect,
    rects: Vec<Rect>,
}

impl DamageList {
    pub fn new(screen: Rect) -> Self {
        DamageList { screen, rects: Vec::new() }
    }

    pub fn add(&mut self, r: Rect) {
        let r = r.intersect(&self.screen);
        if r.is_empty() || self.rects.iter().any(|d| d.contains_rect(&r)) {
            return;
        }
        self.rects.retain(|d| !r.contains_rect(d));
        self.rects.push(r);
    }

    pub fn covers(&self, x: i32, y: i32) -> bool {
        self.rects.iter().any(|d| d.contains(x, y))
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn clear(&mut self) {
        self.rects.clear();
    }

    pub fn take(&mut self) -> Vec<Rect> {
        std::mem::take(&mut self.rects)
    }
}
