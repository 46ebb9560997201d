use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{NodeId, UiTree};

/// Number of nodes bearing each resource id in a tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResourceIdMap {
    entries: BTreeMap<String, usize>,
}

impl ResourceIdMap {
    pub fn count(&self, id: &str) -> usize {
        self.entries.get(id).copied().unwrap_or(0)
    }

    pub fn is_unique(&self, id: &str) -> bool {
        self.count(id) == 1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    fn bump(&mut self, id: &str) {
        *self.entries.entry(id.to_owned()).or_insert(0) += 1;
    }
}

pub fn build_resource_id_map(tree: &UiTree) -> ResourceIdMap {
    build_resource_id_map_traced(tree).0
}

/// Breadth-first construction of the map; also returns the visit order.
pub fn build_resource_id_map_traced(tree: &UiTree) -> (ResourceIdMap, Vec<NodeId>) {
    let mut map = ResourceIdMap::default();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([&tree.root]);
    while let Some(node) = queue.pop_front() {
        order.push(node.node_id);
        if let Some(id) = &node.resource_id {
            map.bump(id);
        }
        queue.extend(node.children.iter());
    }
    (map, order)
}
