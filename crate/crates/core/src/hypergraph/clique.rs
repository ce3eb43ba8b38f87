//! Maximum cliques in the `k`-uniform sense: vertex sets all of whose
//! `k`-subsets are edges.

use super::count::extend_candidates;
use super::HypergraphView;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueResult {
    /// Size of the best clique found.
    pub size: usize,
    /// Whether the search finished, making `size` the clique number.
    pub exact: bool,
    /// The best clique, as sorted vertex indices.
    pub clique: Vec<u32>,
    /// Search nodes visited.
    pub nodes: u64,
}

struct Search<'a> {
    y: &'a HypergraphView,
    best: Vec<u32>,
    nodes: u64,
    node_budget: u64,
    aborted: bool,
}

impl Search<'_> {
    fn run(&mut self, clique: &mut Vec<u32>, cands: &[u32]) {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            self.aborted = true;
            return;
        }
        if clique.len() > self.best.len() {
            self.best = clique.clone();
        }
        for (i, &v) in cands.iter().enumerate() {
            // remaining candidates bound the extension size
            if clique.len() + cands.len() - i <= self.best.len() {
                return;
            }
            let next = extend_candidates(self.y, clique, v, &cands[i + 1..]);
            clique.push(v);
            self.run(clique, &next);
            clique.pop();
            if self.aborted {
                return;
            }
        }
    }
}

/// Branch-and-bound clique number. Vertices are tried in order of
/// decreasing degree (ties by index). When the search exceeds
/// `node_budget` nodes, the best clique so far is returned with
/// `exact = false`.
pub fn omega_clique(y: &HypergraphView, node_budget: u64) -> CliqueResult {
    let degrees = y.vertex_degrees();
    let mut order: Vec<u32> = (0..y.order()).collect();
    order.sort_by(|&a, &b| degrees[b as usize].cmp(&degrees[a as usize]).then(a.cmp(&b)));
    let mut search = Search { y, best: Vec::new(), nodes: 0, node_budget, aborted: false };
    search.run(&mut Vec::new(), &order);
    let mut clique = search.best;
    clique.sort_unstable();
    CliqueResult { size: clique.len(), exact: !search.aborted, clique, nodes: search.nodes }
}
