//! Conforming subdivision of triangular prisms into tetrahedra.
//!
//! Every lateral quad face is split along the diagonal incident to its
//! smallest global node index. Two prisms sharing a quad face therefore
//! agree on the diagonal, and the mesh stays conforming without any
//! neighbor bookkeeping. The min-vertex rule also guarantees the three
//! diagonals of a prism are never cyclic, so a three-tet fill always
//! exists.

/// True when the quad spanning bottom edge `a[i]→a[i+1]` and top edge
/// `b[i]→b[i+1]` takes the "up" diagonal `(a[i], b[i+1])`.
#[inline]
fn diag_up(a: &[usize; 3], b: &[usize; 3], i: usize) -> bool {
    let j = (i + 1) % 3;
    let m = a[i].min(a[j]).min(b[i]).min(b[j]);
    m == a[i] || m == b[j]
}

/// Splits the prism with bottom triangle `a` and top triangle `b`
/// (`b[i]` above `a[i]`) into three tets honoring the per-face diagonals.
pub fn prism_to_tets(a: [usize; 3], b: [usize; 3]) -> [[usize; 4]; 3] {
    let d = [diag_up(&a, &b, 0), diag_up(&a, &b, 1), diag_up(&a, &b, 2)];
    debug_assert!(
        d.iter().any(|&x| x) && d.iter().any(|&x| !x),
        "cyclic diagonal pattern cannot arise from the min-vertex rule"
    );
    // rotate so the pattern starts with an up diagonal and ends with a down
    // diagonal: d[s] && !d[s+2]
    for s in 0..3 {
        if d[s] && !d[(s + 2) % 3] {
            let ar = [a[s], a[(s + 1) % 3], a[(s + 2) % 3]];
            let br = [b[s], b[(s + 1) % 3], b[(s + 2) % 3]];
            return if d[(s + 1) % 3] {
                // pattern (up, up, down)
                [
                    [ar[0], ar[1], ar[2], br[2]],
                    [ar[0], ar[1], br[2], br[1]],
                    [ar[0], br[1], br[2], br[0]],
                ]
            } else {
                // pattern (up, down, down)
                [
                    [ar[0], ar[1], ar[2], br[1]],
                    [ar[0], ar[2], br[2], br[1]],
                    [ar[0], br[0], br[2], br[1]],
                ]
            };
        }
    }
    unreachable!("non-cyclic pattern always admits a rotation");
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn faces(t: &[usize; 4]) -> [[usize; 3]; 4] {
        let mut out = [[0; 3]; 4];
        let idx = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
        for (k, f) in idx.iter().enumerate() {
            let mut tri = [t[f[0]], t[f[1]], t[f[2]]];
            tri.sort_unstable();
            out[k] = tri;
        }
        out
    }

    /// Checks that the three tets tile the prism: 12 boundary face slots,
    /// each interior face appearing exactly twice, and the lateral quads
    /// split by the advertised diagonals.
    fn check_prism(a: [usize; 3], b: [usize; 3]) {
        let tets = prism_to_tets(a, b);
        let mut count: std::collections::HashMap<[usize; 3], usize> = Default::default();
        for t in &tets {
            let set: HashSet<usize> = t.iter().copied().collect();
            assert_eq!(set.len(), 4, "degenerate tet {t:?}");
            for f in faces(t) {
                *count.entry(f).or_insert(0) += 1;
            }
        }
        let boundary: Vec<_> = count.iter().filter(|(_, &c)| c == 1).collect();
        let interior: Vec<_> = count.iter().filter(|(_, &c)| c == 2).collect();
        assert_eq!(boundary.len(), 8, "prism must expose 2 caps + 6 quad halves");
        assert_eq!(interior.len(), 2, "3 tets share exactly 2 interior faces");
        assert!(count.values().all(|&c| c <= 2));
        // caps present
        let mut bot = a;
        bot.sort_unstable();
        let mut top = b;
        top.sort_unstable();
        assert_eq!(count[&bot], 1);
        assert_eq!(count[&top], 1);
        // each lateral quad is covered by the two triangles of its chosen diagonal
        for i in 0..3 {
            let j = (i + 1) % 3;
            let up = diag_up(&a, &b, i);
            let (t1, t2) = if up {
                ([a[i], a[j], b[j]], [a[i], b[j], b[i]])
            } else {
                ([a[i], a[j], b[i]], [a[j], b[j], b[i]])
            };
            let mut t1 = t1;
            let mut t2 = t2;
            t1.sort_unstable();
            t2.sort_unstable();
            assert_eq!(count.get(&t1), Some(&1), "quad {i} half missing");
            assert_eq!(count.get(&t2), Some(&1), "quad {i} half missing");
        }
    }

    #[test]
    fn all_label_permutations_tile() {
        // exercise every relative ordering of the six global labels
        let labels = [0usize, 1, 2, 3, 4, 5];
        let mut perm = labels;
        // Heap's algorithm, fixed iteration count 6! = 720
        fn heaps(k: usize, arr: &mut [usize; 6], out: &mut Vec<[usize; 6]>) {
            if k == 1 {
                out.push(*arr);
                return;
            }
            for i in 0..k {
                heaps(k - 1, arr, out);
                if k % 2 == 0 {
                    arr.swap(i, k - 1);
                } else {
                    arr.swap(0, k - 1);
                }
            }
        }
        let mut perms = Vec::new();
        heaps(6, &mut perm, &mut perms);
        assert_eq!(perms.len(), 720);
        for p in perms {
            let a = [p[0], p[1], p[2]];
            let b = [p[3], p[4], p[5]];
            check_prism(a, b);
        }
    }

    #[test]
    fn shared_quad_face_is_conforming() {
        // two prisms sharing the quad (1,2,8,7): tets on both sides must
        // split it along the same diagonal
        let p1 = prism_to_tets([0, 1, 2], [6, 7, 8]);
        let p2 = prism_to_tets([1, 3, 2], [7, 9, 8]);
        let quad = [1usize, 2, 8, 7];
        let tri_on_quad = |t: &[usize; 4]| -> Option<[usize; 3]> {
            let tri: Vec<usize> = t.iter().copied().filter(|v| quad.contains(v)).collect();
            if tri.len() == 3 {
                let mut f = [tri[0], tri[1], tri[2]];
                f.sort_unstable();
                Some(f)
            } else {
                None
            }
        };
        let f1: HashSet<_> = p1.iter().filter_map(|t| tri_on_quad(t)).collect();
        let f2: HashSet<_> = p2.iter().filter_map(|t| tri_on_quad(t)).collect();
        let shared: HashSet<_> = f1.intersection(&f2).collect();
        assert_eq!(shared.len(), 2, "both prisms must produce the same two quad halves");
    }
}
