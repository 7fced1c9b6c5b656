use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EdgeKey, MultipartiteGraph, PartiteStructure, Vertex};
use crate::error::{Error, Result};

/// On-disk graph: `{"r", "s", "n", "missing_edges": [[p1,i1,p2,i2], ...]}`
/// with `p1 < p2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub r: usize,
    pub s: usize,
    pub n: usize,
    pub missing_edges: Vec<[usize; 4]>,
}

impl GraphFile {
    pub fn from_graph(graph: &MultipartiteGraph) -> Self {
        let st = graph.structure();
        let layout = graph.layout();
        let mut keys: Vec<&EdgeKey> = graph.missing().iter().collect();
        keys.sort_by_key(|e| layout.index_of(e));
        Self {
            r: st.r,
            s: st.s,
            n: st.n,
            missing_edges: keys
                .into_iter()
                .map(|e| [e.lo().part, e.lo().index, e.hi().part, e.hi().index])
                .collect(),
        }
    }

    pub fn into_graph(self) -> Result<MultipartiteGraph> {
        let structure = PartiteStructure::new(self.r, self.s, self.n)?;
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(self.missing_edges.len());
        for [p1, i1, p2, i2] in self.missing_edges {
            if p1 == p2 {
                return Err(Error::Format(format!("edge [{p1},{i1},{p2},{i2}] joins a part to itself")));
            }
            if p1 > p2 {
                return Err(Error::Format(format!("edge [{p1},{i1},{p2},{i2}] must list the lower part first")));
            }
            let (a, b) = (Vertex::new(p1, i1), Vertex::new(p2, i2));
            structure.check_vertex(a)?;
            structure.check_vertex(b)?;
            let e = EdgeKey::new(a, b)?;
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e));
            }
            edges.push(e);
        }
        let mut graph = MultipartiteGraph::complete_from(structure);
        graph.delete_edges(&edges)?;
        Ok(graph)
    }

    pub fn read(path: &Path) -> Result<MultipartiteGraph> {
        let text = std::fs::read_to_string(path)?;
        let file: GraphFile = serde_json::from_str(&text)?;
        file.into_graph()
    }

    pub fn write(graph: &MultipartiteGraph, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&Self::from_graph(graph))?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}
