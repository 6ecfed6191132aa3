use motivic_core::atinfinity::{ordered_cech, rz_complex, CechCover, CoverCell};
use proptest::prelude::*;
use std::collections::BTreeSet;

const CASES: u32 = 1000;

/// A cover by subsets of a random graph on `points` vertices: member `i` is a
/// vertex set, `X_J` the intersection, components the connected components of
/// the induced subgraph.
#[derive(Clone, Debug)]
struct Model {
    points: usize,
    links: Vec<(usize, usize)>,
    members: Vec<BTreeSet<usize>>,
}

fn model() -> impl Strategy<Value = Model> {
    (2usize..=8, 1usize..=5).prop_flat_map(|(points, m)| {
        (
            prop::collection::vec((0..points, 0..points), 0..=12),
            prop::collection::vec(prop::collection::btree_set(0..points, 1..=points), m),
        )
            .prop_map(move |(links, members)| Model { points, links, members })
    })
}

impl Model {
    /// Component labels of the induced subgraph on `set`, by smallest vertex order.
    fn components(&self, set: &BTreeSet<usize>) -> Vec<Option<usize>> {
        let mut parent: Vec<usize> = (0..self.points).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(a, b) in &self.links {
            if set.contains(&a) && set.contains(&b) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut roots = Vec::new();
        (0..self.points)
            .map(|v| {
                if !set.contains(&v) {
                    return None;
                }
                let r = find(&mut parent, v);
                Some(match roots.iter().position(|&x| x == r) {
                    Some(i) => i,
                    None => {
                        roots.push(r);
                        roots.len() - 1
                    }
                })
            })
            .collect()
    }

    fn intersection(&self, j: &[usize]) -> BTreeSet<usize> {
        let mut it = j.iter().map(|&i| self.members[i].clone());
        let first = it.next().unwrap();
        it.fold(first, |acc, s| acc.intersection(&s).cloned().collect())
    }

    fn cover(&self) -> CechCover {
        let m = self.members.len();
        let mut cells = Vec::new();
        for mask in 1usize..1 << m {
            let j: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let set = self.intersection(&j);
            if set.is_empty() {
                continue;
            }
            let comps = self.components(&set);
            let count = comps.iter().flatten().max().unwrap() + 1;
            // one representative vertex per component
            let reps: Vec<usize> = (0..count).map(|c| comps.iter().position(|&x| x == Some(c)).unwrap()).collect();
            let faces = if j.len() < 2 {
                vec![]
            } else {
                (0..j.len())
                    .map(|k| {
                        let mut f = j.clone();
                        f.remove(k);
                        let fc = self.components(&self.intersection(&f));
                        reps.iter().map(|&v| fc[v].unwrap()).collect()
                    })
                    .collect()
            };
            cells.push(CoverCell { subset: j, components: count, faces });
        }
        CechCover { members: m, cells }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn cech_differentials_square_to_zero(m in model()) {
        let c = ordered_cech(&m.cover()).unwrap();
        prop_assert!(c.is_complex());
        let h = c.homology();
        let chi: i64 = h.iter().enumerate().map(|(n, g)| if n % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) }).sum();
        prop_assert_eq!(chi, c.euler_characteristic());
    }

    #[test]
    fn rz_terms_compose_to_zero(m in model()) {
        let terms = rz_complex(&m.cover()).unwrap();
        for w in terms.windows(2).skip(1) {
            prop_assert!((&w[0].differential * &w[1].differential).is_zero());
        }
        for t in &terms {
            prop_assert_eq!((t.twist, t.shift), (t.degree as i64, 2 * t.degree as i64));
        }
    }
}

#[test]
fn connected_cover_of_a_contractible_union() {
    // a path 0–1–2–3 covered by three overlapping edges
    let m = Model {
        points: 4,
        links: vec![(0, 1), (1, 2), (2, 3)],
        members: vec![[0, 1].into(), [1, 2].into(), [2, 3].into()],
    };
    let h = ordered_cech(&m.cover()).unwrap().homology();
    assert_eq!(h[0].free_rank, 1);
    assert!(h[1..].iter().all(|g| g.is_zero()));
}
