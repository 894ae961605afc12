//! A small catalog of concrete groups used by the sweeps: every group of
//! order <= 16 (42 of them, up to isomorphism) plus a handful of order-24
//! groups. All are built as explicit tables from standard constructions
//! (cyclic, direct product, dihedral, dicyclic, metacyclic, permutation
//! groups, SL2 over small rings, and two one-off order-16 constructions).

use crate::error::Result;
use crate::fingroup::FiniteGroup;

fn build(label: &str, order: usize, table: Vec<u16>) -> FiniteGroup {
    FiniteGroup::from_table(label, order, table)
        .unwrap_or_else(|e| panic!("library construction {label} is not a group: {e}"))
}

/// Z/n, elements 0..n with addition.
pub fn cyclic(n: usize) -> FiniteGroup {
    let mut table = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = ((a + b) % n) as u16;
        }
    }
    build(&format!("Z{n}"), n, table)
}

/// Direct product; element (a, b) has index a * |H| + b.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup, label: &str) -> FiniteGroup {
    let (ng, nh) = (g.order(), h.order());
    let n = ng * nh;
    let mut table = vec![0u16; n * n];
    for a1 in 0..ng {
        for b1 in 0..nh {
            let row = a1 * nh + b1;
            for a2 in 0..ng {
                for b2 in 0..nh {
                    let col = a2 * nh + b2;
                    let prod = g.mul(a1 as u16, a2 as u16) as usize * nh
                        + h.mul(b1 as u16, b2 as u16) as usize;
                    table[row * n + col] = prod as u16;
                }
            }
        }
    }
    build(label, n, table)
}

/// Dihedral group of order 2n: rotations r^i and reflections r^i f,
/// indexed s*n + i for (r^i f^s).
pub fn dihedral(n: usize) -> FiniteGroup {
    let order = 2 * n;
    let idx = |i: usize, s: usize| s * n + i;
    let mut table = vec![0u16; order * order];
    for i in 0..n {
        for s in 0..2 {
            for j in 0..n {
                for t in 0..2 {
                    // (r^i f^s)(r^j f^t) = r^(i + (-1)^s j) f^(s+t)
                    let k = if s == 0 { (i + j) % n } else { (i + n - j % n) % n };
                    table[idx(i, s) * order + idx(j, t)] = idx(k, (s + t) % 2) as u16;
                }
            }
        }
    }
    build(&format!("D{order}"), order, table)
}

/// Dicyclic group of order 4n: <a, b | a^(2n) = e, b^2 = a^n, bab^-1 = a^-1>.
/// Dic(2) is the quaternion group Q8, Dic(4) is Q16.
pub fn dicyclic(n: usize) -> FiniteGroup {
    let m = 2 * n;
    let order = 4 * n;
    let idx = |i: usize, j: usize| j * m + i;
    let mut table = vec![0u16; order * order];
    for i in 0..m {
        for j in 0..2 {
            for i2 in 0..m {
                for j2 in 0..2 {
                    let mut k = if j == 0 { i + i2 } else { i + m - i2 };
                    if j == 1 && j2 == 1 {
                        k += n; // b^2 = a^n
                    }
                    table[idx(i, j) * order + idx(i2, j2)] = idx(k % m, (j + j2) % 2) as u16;
                }
            }
        }
    }
    let label = match n {
        2 => "Q8".to_string(),
        4 => "Q16".to_string(),
        _ => format!("Dic{n}"),
    };
    build(&label, order, table)
}

/// Metacyclic group Z/n x|_k Z/m: <a, b | a^n, b^m, b a b^-1 = a^k>,
/// which needs k^m = 1 mod n. Element a^i b^j has index j*n + i.
pub fn metacyclic(n: usize, m: usize, k: usize, label: &str) -> FiniteGroup {
    let mut kpow = vec![1usize; m];
    for j in 1..m {
        kpow[j] = kpow[j - 1] * k % n;
    }
    assert_eq!(kpow[m - 1] * k % n, 1, "k^m must be 1 mod n");
    let order = n * m;
    let idx = |i: usize, j: usize| j * n + i;
    let mut table = vec![0u16; order * order];
    for i in 0..n {
        for j in 0..m {
            for i2 in 0..n {
                for j2 in 0..m {
                    // (a^i b^j)(a^i2 b^j2) = a^(i + k^j i2) b^(j+j2)
                    let a = (i + kpow[j] * i2) % n;
                    table[idx(i, j) * order + idx(i2, j2)] = idx(a, (j + j2) % m) as u16;
                }
            }
        }
    }
    build(label, order, table)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut perms = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &perms {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    perms // lexicographic order; identity first
}

fn perm_parity(p: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

fn perm_group(perms: Vec<Vec<usize>>, label: &str) -> FiniteGroup {
    let order = perms.len();
    let mut table = vec![0u16; order * order];
    for (a, p) in perms.iter().enumerate() {
        for (b, q) in perms.iter().enumerate() {
            // (p . q)(x) = p(q(x))
            let comp: Vec<usize> = (0..p.len()).map(|x| p[q[x]]).collect();
            let c = perms.iter().position(|r| *r == comp).expect("closed");
            table[a * order + b] = c as u16;
        }
    }
    build(label, order, table)
}

/// Symmetric group on n points (n <= 5 is sensible), permutations in
/// lexicographic order so the identity is element 0.
pub fn symmetric(n: usize) -> FiniteGroup {
    perm_group(permutations(n), &format!("S{n}"))
}

/// Alternating group on n points.
pub fn alternating(n: usize) -> FiniteGroup {
    let perms: Vec<Vec<usize>> =
        permutations(n).into_iter().filter(|p| perm_parity(p) == 0).collect();
    perm_group(perms, &format!("A{n}"))
}

/// SL2 over Z/m as a table group, together with the indices of the two
/// standard unipotent generators [[1,1],[0,1]] and [[1,0],[1,1]].
///
/// Matrices are listed in lexicographic order of (a, b, c, d); the identity
/// need not be element 0, which is fine.
pub fn sl2(m: u64) -> (FiniteGroup, u16, u16) {
    let mut mats: Vec<[u64; 4]> = Vec::new();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    if (a * d + m * m - (b * c) % (m * m)) % m == 1 % m {
                        mats.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let order = mats.len();
    let pos = |mat: [u64; 4]| mats.iter().position(|x| *x == mat).expect("closed") as u16;
    let mut table = vec![0u16; order * order];
    for (i, p) in mats.iter().enumerate() {
        for (j, q) in mats.iter().enumerate() {
            let prod = [
                (p[0] * q[0] + p[1] * q[2]) % m,
                (p[0] * q[1] + p[1] * q[3]) % m,
                (p[2] * q[0] + p[3] * q[2]) % m,
                (p[2] * q[1] + p[3] * q[3]) % m,
            ];
            table[i * order + j] = pos(prod);
        }
    }
    let g = build(&format!("SL(2,{m})"), order, table);
    let r = pos([1, 1 % m, 0, 1]);
    let l = pos([1, 0, 1 % m, 1]);
    (g, r, l)
}

/// Central product of D8 and Z4 (equivalently Q8 and Z4): the order-16
/// "Pauli group" {i^p sigma} with sigma in {I, X, Y, Z}. Element (p, s) has
/// index p*4 + s; phases compose additively mod 4 with the usual
/// XY = iZ, YZ = iX, ZX = iY rules.
pub fn pauli16() -> FiniteGroup {
    // prod[s][t] = (phase increment, resulting sigma)
    let prod = |s: usize, t: usize| -> (usize, usize) {
        match (s, t) {
            (0, t) => (0, t),
            (s, 0) => (0, s),
            (s, t) if s == t => (0, 0),
            (1, 2) => (1, 3),
            (2, 3) => (1, 1),
            (3, 1) => (1, 2),
            (2, 1) => (3, 3),
            (3, 2) => (3, 1),
            (1, 3) => (3, 2),
            _ => unreachable!(),
        }
    };
    let order = 16;
    let idx = |p: usize, s: usize| p * 4 + s;
    let mut table = vec![0u16; order * order];
    for p in 0..4 {
        for s in 0..4 {
            for q in 0..4 {
                for t in 0..4 {
                    let (dp, u) = prod(s, t);
                    table[idx(p, s) * order + idx(q, t)] = idx((p + q + dp) % 4, u) as u16;
                }
            }
        }
    }
    build("Pauli16", order, table)
}

/// The remaining nonabelian group of order 16: (Z4 x Z2) x| Z2 where the
/// involution acts by (a, b) -> (a, b + a mod 2). Index k*8 + j*4 + i for
/// the element (a^i b^j) c^k.
pub fn crossed16() -> FiniteGroup {
    let order = 16;
    let idx = |i: usize, j: usize, k: usize| k * 8 + j * 4 + i;
    let mut table = vec![0u16; order * order];
    for i in 0..4 {
        for j in 0..2 {
            for k in 0..2 {
                for i2 in 0..4 {
                    for j2 in 0..2 {
                        for k2 in 0..2 {
                            let a = (i + i2) % 4;
                            let b = (j + j2 + k * i2) % 2;
                            table[idx(i, j, k) * order + idx(i2, j2, k2)] =
                                idx(a, b, (k + k2) % 2) as u16;
                        }
                    }
                }
            }
        }
    }
    build("(Z4xZ2):Z2", order, table)
}

/// All groups of order <= min(max_order, 16), one per isomorphism class,
/// plus a selection of order-24 groups when max_order >= 24.
pub fn library(max_order: usize) -> Vec<FiniteGroup> {
    let mut groups: Vec<FiniteGroup> = Vec::new();
    let mut push = |g: FiniteGroup| {
        if g.order() <= max_order {
            groups.push(g);
        }
    };
    for n in 1..=16 {
        push(cyclic(n));
    }
    push(direct_product(&cyclic(2), &cyclic(2), "Z2xZ2"));
    push(symmetric(3));
    push(direct_product(&cyclic(4), &cyclic(2), "Z4xZ2"));
    push(direct_product(&cyclic(2), &direct_product(&cyclic(2), &cyclic(2), "Z2xZ2"), "Z2xZ2xZ2"));
    push(dihedral(4));
    push(dicyclic(2)); // Q8
    push(direct_product(&cyclic(3), &cyclic(3), "Z3xZ3"));
    push(dihedral(5));
    push(direct_product(&cyclic(6), &cyclic(2), "Z6xZ2"));
    push(dihedral(6));
    push(alternating(4));
    push(dicyclic(3));
    push(dihedral(7));
    // Order 16: five abelian, nine nonabelian.
    push(direct_product(&cyclic(8), &cyclic(2), "Z8xZ2"));
    push(direct_product(&cyclic(4), &cyclic(4), "Z4xZ4"));
    push(direct_product(&cyclic(4), &direct_product(&cyclic(2), &cyclic(2), "Z2xZ2"), "Z4xZ2xZ2"));
    push(direct_product(
        &direct_product(&cyclic(2), &cyclic(2), "Z2xZ2"),
        &direct_product(&cyclic(2), &cyclic(2), "Z2xZ2"),
        "Z2^4",
    ));
    push(dihedral(8));
    push(dicyclic(4)); // Q16
    push(metacyclic(8, 2, 3, "SD16"));
    push(metacyclic(8, 2, 5, "M16"));
    push(direct_product(&dihedral(4), &cyclic(2), "D8xZ2"));
    push(direct_product(&dicyclic(2), &cyclic(2), "Q8xZ2"));
    push(metacyclic(4, 4, 3, "Z4:Z4"));
    push(pauli16());
    push(crossed16());
    if max_order >= 24 {
        push(cyclic(24));
        push(symmetric(4));
        push(sl2(3).0);
        push(direct_product(&alternating(4), &cyclic(2), "A4xZ2"));
        push(dihedral(12));
        push(dicyclic(6));
    }
    groups
}

fn order_histogram(g: &FiniteGroup) -> Vec<usize> {
    let mut h = vec![0usize; g.order() + 1];
    for x in g.elements() {
        h[g.element_order(x)] += 1;
    }
    h
}

fn center_size(g: &FiniteGroup) -> usize {
    g.elements()
        .filter(|&z| g.elements().all(|x| g.mul(z, x) == g.mul(x, z)))
        .count()
}

fn generating_sequence(g: &FiniteGroup) -> Vec<u16> {
    let mut gens: Vec<u16> = Vec::new();
    let mut sub = g.subgroup_generated(&gens);
    while sub.len() < g.order() {
        let next = g.elements().find(|x| sub.binary_search(x).is_err()).unwrap();
        gens.push(next);
        sub = g.subgroup_generated(&gens);
    }
    gens
}

/// Brute-force isomorphism test for small groups (intended for order <= 32).
///
/// Cheap invariants first; then backtracking over images of a generating
/// sequence, extending each candidate assignment to a full map by closure
/// and verifying it is a bijective homomorphism.
pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    if g.order() != h.order() {
        return false;
    }
    if order_histogram(g) != order_histogram(h) || center_size(g) != center_size(h) {
        return false;
    }
    let mut gc: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.size()).collect();
    let mut hc: Vec<usize> = h.conjugacy_classes().iter().map(|c| c.size()).collect();
    gc.sort_unstable();
    hc.sort_unstable();
    if gc != hc {
        return false;
    }
    let gens = generating_sequence(g);
    let mut images = vec![0u16; gens.len()];
    extend(g, h, &gens, &mut images, 0)
}

fn extend(g: &FiniteGroup, h: &FiniteGroup, gens: &[u16], images: &mut [u16], depth: usize) -> bool {
    if depth == gens.len() {
        return check_map(g, h, gens, images);
    }
    let want = g.element_order(gens[depth]);
    for cand in h.elements() {
        if h.element_order(cand) != want {
            continue;
        }
        images[depth] = cand;
        // Quick prune: the partial images must not generate something too
        // big too early is not a valid prune (subgroup sizes differ), but a
        // full check only at the leaves is fast enough at these orders.
        if extend(g, h, gens, images, depth + 1) {
            return true;
        }
    }
    false
}

fn check_map(g: &FiniteGroup, h: &FiniteGroup, gens: &[u16], images: &[u16]) -> bool {
    let n = g.order();
    let mut phi: Vec<Option<u16>> = vec![None; n];
    phi[g.identity() as usize] = Some(h.identity());
    let mut frontier = vec![g.identity()];
    let mut defined = 1usize;
    while let Some(x) = frontier.pop() {
        let fx = phi[x as usize].unwrap();
        for (i, &gen) in gens.iter().enumerate() {
            let y = g.mul(x, gen);
            let fy = h.mul(fx, images[i]);
            match phi[y as usize] {
                None => {
                    phi[y as usize] = Some(fy);
                    defined += 1;
                    frontier.push(y);
                }
                Some(old) if old != fy => return false,
                _ => {}
            }
        }
    }
    if defined != n {
        return false; // images generate a proper subgroup
    }
    let phi: Vec<u16> = phi.into_iter().map(Option::unwrap).collect();
    let mut seen = vec![false; n];
    for &v in &phi {
        if seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    for a in 0..n as u16 {
        for b in 0..n as u16 {
            if phi[g.mul(a, b) as usize] != h.mul(phi[a as usize], phi[b as usize]) {
                return false;
            }
        }
    }
    true
}

/// Look a library group up by label (the `library(24)` catalog).
pub fn by_label(label: &str) -> Result<FiniteGroup> {
    library(24)
        .into_iter()
        .find(|g| g.label() == label)
        .ok_or_else(|| crate::error::Error::BadRecord { reason: format!("no library group labeled {label}") })
}
