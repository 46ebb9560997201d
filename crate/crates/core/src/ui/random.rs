//! Seeded random tree generator for property tests and benchmarks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{NodeFlags, NodeId, Rect, UiNode, UiTree, WindowKind};

const CLASSES: &[&str] = &["LinearLayout", "FrameLayout", "TextView", "Button", "ImageView", "TableRow"];

#[derive(Debug, Clone, Copy)]
pub struct TreeShape {
    pub max_depth: usize,
    pub max_fanout: usize,
    pub max_nodes: usize,
    /// Distinct resource ids to draw from; small pools force duplicates.
    pub id_pool: usize,
    /// Probability that a node carries a resource id.
    pub id_probability: f64,
    pub screen_width: i32,
    pub screen_height: i32,
}

impl Default for TreeShape {
    fn default() -> Self {
        TreeShape {
            max_depth: 8,
            max_fanout: 6,
            max_nodes: 200,
            id_pool: 24,
            id_probability: 0.6,
            screen_width: 1080,
            screen_height: 1920,
        }
    }
}

pub fn random_tree(seed: u64, shape: TreeShape) -> UiTree {
    let mut rng = StdRng::seed_from_u64(seed);
    let screen = Rect::sized(shape.screen_width, shape.screen_height).expect("positive screen");
    let mut next_id = 0u32;
    let root = grow(&mut rng, &shape, screen, 0, &mut next_id);
    UiTree::new(WindowKind::Activity, screen, root)
}

fn grow(rng: &mut StdRng, shape: &TreeShape, area: Rect, depth: usize, next_id: &mut u32) -> UiNode {
    let id = NodeId(*next_id);
    *next_id += 1;
    let class = CLASSES[rng.random_range(0..CLASSES.len())];
    let mut node = UiNode::new(id, class, area);
    if rng.random_bool(shape.id_probability) {
        node.resource_id = Some(format!("id{}", rng.random_range(0..shape.id_pool.max(1))));
    }
    if rng.random_bool(0.5) {
        node.text = Some(format!("t{}", rng.random_range(0..8)));
    }
    node.flags = NodeFlags {
        clickable: rng.random_bool(0.5),
        enabled: rng.random_bool(0.9),
        focusable: rng.random_bool(0.3),
        ..NodeFlags::default()
    };
    if depth + 1 >= shape.max_depth {
        return node;
    }
    let fanout = rng.random_range(0..=shape.max_fanout);
    for _ in 0..fanout {
        if *next_id as usize >= shape.max_nodes {
            break;
        }
        let child_area = sub_rect(rng, area);
        let child = grow(rng, shape, child_area, depth + 1, next_id);
        node.children.push(child);
    }
    node
}

fn sub_rect(rng: &mut StdRng, area: Rect) -> Rect {
    let (w, h) = (area.width().max(1), area.height().max(1));
    let l = area.left() + rng.random_range(0..w);
    let t = area.top() + rng.random_range(0..h);
    let r = rng.random_range(l..=area.right().max(l));
    let b = rng.random_range(t..=area.bottom().max(t));
    Rect::new(l, t, r, b).expect("ordered by construction")
}
