use std::collections::BTreeMap;
use std::sync::Arc;

use crate::guide::{GuideId, NodeKey};
use crate::state::PatternState;

/// Double-ended priority queue of search nodes ordered by a guide.
#[derive(Debug)]
pub struct NodeQueue {
    guide: GuideId,
    nodes: BTreeMap<NodeKey, Arc<PatternState>>,
}

impl NodeQueue {
    pub fn new(guide: GuideId) -> Self {
        Self {
            guide,
            nodes: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn push(&mut self, node: Arc<PatternState>) {
        let key = NodeKey::of(self.guide, &node);
        self.nodes.insert(key, node);
    }

    pub fn pop_best(&mut self) -> Option<Arc<PatternState>> {
        self.nodes.pop_first().map(|(_, n)| n)
    }

    pub fn pop_worst(&mut self) -> Option<Arc<PatternState>> {
        self.nodes.pop_last().map(|(_, n)| n)
    }

    /// Discards worst nodes until at most `threshold` remain; returns how many
    /// were dropped.
    pub fn trim(&mut self, threshold: usize) -> usize {
        let mut dropped = 0;
        while self.nodes.len() > threshold {
            self.nodes.pop_last();
            dropped += 1;
        }
        dropped
    }
}
