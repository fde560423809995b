//! Isomorphism of vertex-colored, edge-labeled digraphs with at most one edge
//! per ordered vertex pair.

use std::collections::{BTreeMap, VecDeque};

/// A graph view used for isomorphism testing.
pub struct LabeledGraph<C, L> {
    pub colors: Vec<C>,
    pub edges: BTreeMap<(usize, usize), L>,
}

type Signature<L> = (usize, Vec<(bool, L, usize)>);

/// Color refinement run jointly on both graphs so that class ids are comparable.
fn refine<C: Ord + Clone, L: Ord + Clone>(
    a: &LabeledGraph<C, L>,
    b: &LabeledGraph<C, L>,
) -> (Vec<usize>, Vec<usize>) {
    let mut ids: BTreeMap<C, usize> = BTreeMap::new();
    for c in a.colors.iter().chain(&b.colors) {
        let next = ids.len();
        ids.entry(c.clone()).or_insert(next);
    }
    let mut ca: Vec<usize> = a.colors.iter().map(|c| ids[c]).collect();
    let mut cb: Vec<usize> = b.colors.iter().map(|c| ids[c]).collect();
    let mut classes = ids.len();
    loop {
        let sig = |g: &LabeledGraph<C, L>, col: &[usize]| -> Vec<Signature<L>> {
            let mut out: Vec<Signature<L>> = col.iter().map(|&c| (c, Vec::new())).collect();
            for (&(s, t), l) in &g.edges {
                out[s].1.push((true, l.clone(), col[t]));
                out[t].1.push((false, l.clone(), col[s]));
            }
            for o in &mut out {
                o.1.sort();
            }
            out
        };
        let sa = sig(a, &ca);
        let sb = sig(b, &cb);
        let mut table: BTreeMap<&Signature<L>, usize> = BTreeMap::new();
        for s in sa.iter().chain(&sb) {
            let next = table.len();
            table.entry(s).or_insert(next);
        }
        let na: Vec<usize> = sa.iter().map(|s| table[s]).collect();
        let nb: Vec<usize> = sb.iter().map(|s| table[s]).collect();
        let count = table.len();
        ca = na;
        cb = nb;
        if count == classes {
            return (ca, cb);
        }
        classes = count;
    }
}

/// Finds a bijection `φ` with `colors_b[φ(v)] = colors_a[v]` and
/// `edges_b[(φ(s), φ(t))] = edges_a[(s, t)]` for all pairs, or `None`.
pub fn find_isomorphism<C: Ord + Clone, L: Ord + Clone>(
    a: &LabeledGraph<C, L>,
    b: &LabeledGraph<C, L>,
) -> Option<Vec<usize>> {
    let n = a.colors.len();
    if n != b.colors.len() || a.edges.len() != b.edges.len() {
        return None;
    }
    let (ca, cb) = refine(a, b);
    let mut hist_a = ca.clone();
    let mut hist_b = cb.clone();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return None;
    }

    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(s, t) in a.edges.keys() {
        nbrs[s].push(t);
        nbrs[t].push(s);
    }
    // breadth-first order so each new vertex is constrained by mapped neighbours
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&v| hist_a.iter().filter(|&&c| c == ca[v]).count());
    for s in starts {
        if placed[s] {
            continue;
        }
        placed[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for &w in &nbrs[v] {
                if !placed[w] {
                    placed[w] = true;
                    q.push_back(w);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(0, &order, a, b, &ca, &cb, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn search<C, L: Eq>(
    depth: usize,
    order: &[usize],
    a: &LabeledGraph<C, L>,
    b: &LabeledGraph<C, L>,
    ca: &[usize],
    cb: &[usize],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else { return true };
    for w in 0..cb.len() {
        if used[w] || cb[w] != ca[v] {
            continue;
        }
        map[v] = w;
        let consistent = order[..=depth].iter().all(|&u| {
            let mu = map[u];
            a.edges.get(&(v, u)) == b.edges.get(&(w, mu)) && a.edges.get(&(u, v)) == b.edges.get(&(mu, w))
        });
        if consistent {
            used[w] = true;
            if search(depth + 1, order, a, b, ca, cb, map, used) {
                return true;
            }
            used[w] = false;
        }
        map[v] = usize::MAX;
    }
    false
}
