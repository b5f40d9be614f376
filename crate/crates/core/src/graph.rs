//! Dense index over a case's elements for the traversal-heavy queries.
//! Edges whose endpoints are not elements of the case are skipped.

use std::collections::{BTreeSet, HashMap};

use crate::model::{AssuranceCase, EdgeKind, ElementId, ElementKind};

pub(crate) struct CaseGraph<'a> {
    ids: Vec<&'a ElementId>,
    kinds: Vec<ElementKind>,
    index: HashMap<&'a ElementId, usize>,
    // [edge kind][node] -> neighbours in declaration order
    out: [Vec<Vec<usize>>; 2],
    inc: [Vec<Vec<usize>>; 2],
}

fn slot(kind: EdgeKind) -> usize {
    match kind {
        EdgeKind::SupportedBy => 0,
        EdgeKind::InContextOf => 1,
    }
}

impl<'a> CaseGraph<'a> {
    pub fn new(case: &'a AssuranceCase) -> Self {
        let n = case.elements.len();
        let mut index = HashMap::with_capacity(n);
        for (i, e) in case.elements.iter().enumerate() {
            index.entry(&e.id).or_insert(i);
        }
        let mut out = [vec![Vec::new(); n], vec![Vec::new(); n]];
        let mut inc = [vec![Vec::new(); n], vec![Vec::new(); n]];
        for edge in &case.edges {
            if let (Some(&s), Some(&t)) = (index.get(&edge.source), index.get(&edge.target)) {
                out[slot(edge.kind)][s].push(t);
                inc[slot(edge.kind)][t].push(s);
            }
        }
        CaseGraph {
            ids: case.elements.iter().map(|e| &e.id).collect(),
            kinds: case.elements.iter().map(|e| e.kind).collect(),
            index,
            out,
            inc,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn index_of(&self, id: &ElementId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn id(&self, i: usize) -> &'a ElementId {
        self.ids[i]
    }

    pub fn kind(&self, i: usize) -> ElementKind {
        self.kinds[i]
    }

    pub fn out(&self, i: usize, kind: EdgeKind) -> &[usize] {
        &self.out[slot(kind)][i]
    }

    pub fn inc(&self, i: usize, kind: EdgeKind) -> &[usize] {
        &self.inc[slot(kind)][i]
    }

    fn walk(&self, starts: &[usize], kinds: &[EdgeKind], reverse: bool) -> BTreeSet<usize> {
        let mut seen: BTreeSet<usize> = starts.iter().copied().collect();
        let mut stack: Vec<usize> = starts.to_vec();
        while let Some(v) = stack.pop() {
            for &kind in kinds {
                let next = if reverse { self.inc(v, kind) } else { self.out(v, kind) };
                for &w in next {
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
        seen
    }

    /// Nodes that reach any start along `kinds`, starts included.
    pub fn reverse_reach(&self, starts: &[usize], kinds: &[EdgeKind]) -> BTreeSet<usize> {
        self.walk(starts, kinds, true)
    }

    /// Nodes reachable from any start along `kinds`, starts included.
    pub fn forward_reach(&self, starts: &[usize], kinds: &[EdgeKind]) -> BTreeSet<usize> {
        self.walk(starts, kinds, false)
    }

    /// One cycle among `region` nodes along `kind` edges, in edge order.
    pub fn find_cycle_within(&self, kind: EdgeKind, region: &BTreeSet<usize>) -> Option<Vec<usize>> {
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; self.len()];
        for &root in region {
            if color[root] != WHITE {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            color[root] = GREY;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                let succ = self.out(v, kind);
                if *next < succ.len() {
                    let w = succ[*next];
                    *next += 1;
                    if !region.contains(&w) {
                        continue;
                    }
                    match color[w] {
                        WHITE => {
                            color[w] = GREY;
                            stack.push((w, 0));
                        }
                        GREY => {
                            let pos = stack.iter().position(|&(u, _)| u == w).unwrap();
                            return Some(stack[pos..].iter().map(|&(u, _)| u).collect());
                        }
                        _ => {}
                    }
                } else {
                    color[v] = BLACK;
                    stack.pop();
                }
            }
        }
        None
    }

    /// Strongly connected components along `kind` that contain a cycle
    /// (more than one node, or a self-loop). Members sorted by index.
    pub fn cyclic_components(&self, kind: EdgeKind) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut counter = 0usize;
        let mut components = Vec::new();

        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&(v, next)) = call.last() {
                let succ = self.out(v, kind);
                if next < succ.len() {
                    call.last_mut().unwrap().1 += 1;
                    let w = succ[next];
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut component = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            component.push(w);
                            if w == v {
                                break;
                            }
                        }
                        let cyclic = component.len() > 1 || self.out(v, kind).contains(&v);
                        if cyclic {
                            component.sort_unstable();
                            components.push(component);
                        }
                    }
                }
            }
        }
        components.sort();
        components
    }

    /// Node count of the longest path along `kind`, ignoring edges that close
    /// a cycle on the current DFS path. Zero for an empty graph.
    pub fn longest_path(&self, kind: EdgeKind) -> usize {
        let n = self.len();
        let mut memo: Vec<Option<usize>> = vec![None; n];
        let mut on_path = vec![false; n];
        let mut best = 0;
        for root in 0..n {
            if memo[root].is_some() {
                best = best.max(memo[root].unwrap());
                continue;
            }
            let mut call: Vec<(usize, usize, usize)> = vec![(root, 0, 0)];
            on_path[root] = true;
            while let Some(&mut (v, ref mut next, ref mut deepest)) = call.last_mut() {
                let succ = self.out(v, kind);
                if *next < succ.len() {
                    let w = succ[*next];
                    *next += 1;
                    if on_path[w] {
                        continue;
                    }
                    if let Some(d) = memo[w] {
                        *deepest = (*deepest).max(d);
                    } else {
                        on_path[w] = true;
                        call.push((w, 0, 0));
                    }
                } else {
                    let depth = *deepest + 1;
                    memo[v] = Some(depth);
                    on_path[v] = false;
                    call.pop();
                    if let Some(parent) = call.last_mut() {
                        parent.2 = parent.2.max(depth);
                    }
                }
            }
            best = best.max(memo[root].unwrap_or(0));
        }
        best
    }
}
