//! Exact 2x2 integer matrices: products, powers, determinants, and Smith
//! normal form. Entries live in i64 with i128 intermediates; the orbit
//! enumerations stay far below overflow at the periods we handle, but every
//! product asserts the result fits.

/// Row-major 2x2 integer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn from_rows(rows: [[i64; 2]; 2]) -> Mat2 {
        Mat2 { a: rows[0][0], b: rows[0][1], c: rows[1][0], d: rows[1][1] }
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn det(&self) -> i64 {
        checked(self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128)
    }

    pub fn trace(&self) -> i64 {
        self.a.checked_add(self.d).expect("trace overflow")
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let p = |x: i64, y: i64, z: i64, w: i64| checked(x as i128 * y as i128 + z as i128 * w as i128);
        Mat2 {
            a: p(self.a, o.a, self.b, o.c),
            b: p(self.a, o.b, self.b, o.d),
            c: p(self.c, o.a, self.d, o.c),
            d: p(self.c, o.b, self.d, o.d),
        }
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a - o.a,
            b: self.b - o.b,
            c: self.c - o.c,
            d: self.d - o.d,
        }
    }

    pub fn pow(&self, k: u32) -> Mat2 {
        let mut acc = Mat2::IDENTITY;
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Adjugate: `self * adj = det * I`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Apply to a column vector, exactly.
    pub fn apply(&self, v: [i64; 2]) -> [i64; 2] {
        [
            checked(self.a as i128 * v[0] as i128 + self.b as i128 * v[1] as i128),
            checked(self.c as i128 * v[0] as i128 + self.d as i128 * v[1] as i128),
        ]
    }
}

fn checked(x: i128) -> i64 {
    i64::try_from(x).expect("2x2 integer arithmetic overflowed i64")
}

/// Smith normal form of a nonsingular 2x2 integer matrix:
/// returns (U, d1, d2, V) with M = U * diag(d1, d2) * V, d1 | d2,
/// d1, d2 > 0, and U, V unimodular.
pub fn smith_normal_form(m: &Mat2) -> (Mat2, i64, i64, Mat2) {
    assert!(m.det() != 0, "Smith form here requires a nonsingular matrix");
    // Reduce P * M * Q to diagonal by alternating row and column gcd steps;
    // then M = P^-1 * D * Q^-1 with unimodular P, Q.
    let mut w = *m;
    let mut p = Mat2::IDENTITY; // accumulated row ops
    let mut q = Mat2::IDENTITY; // accumulated column ops
    loop {
        if w.c != 0 {
            // Row op clearing the (2,1) entry.  Plain elimination when the
            // pivot already divides it — the gcd-built unimodular step is
            // only progress when it strictly shrinks the pivot, and a free
            // Bezout choice on a divisible pair can cycle forever.
            let r = if w.a != 0 && w.c % w.a == 0 {
                Mat2::new(1, 0, -(w.c / w.a), 1)
            } else {
                let (g, x, y) = egcd(w.a, w.c);
                Mat2::new(x, y, -(w.c / g), w.a / g) // det = 1
            };
            w = r.mul(&w);
            p = r.mul(&p);
            continue;
        }
        if w.b != 0 {
            // Column op clearing the (1,2) entry, same pivot rule.
            let s = if w.a != 0 && w.b % w.a == 0 {
                Mat2::new(1, -(w.b / w.a), 0, 1)
            } else {
                let (g, x, y) = egcd(w.a, w.b);
                Mat2::new(x, -(w.b / g), y, w.a / g) // det = 1
            };
            w = w.mul(&s);
            q = q.mul(&s);
            continue;
        }
        // Diagonal. Enforce d1 | d2 by folding d2 into column 1 if needed.
        if w.d % w.a != 0 {
            let s = Mat2::new(1, 0, 1, 1); // add col 2 to col 1
            w = w.mul(&s);
            q = q.mul(&s);
            continue;
        }
        break;
    }
    // Fix signs: make both diagonal entries positive.
    if w.a < 0 {
        let r = Mat2::new(-1, 0, 0, 1);
        w = r.mul(&w);
        p = r.mul(&p);
    }
    if w.d < 0 {
        let s = Mat2::new(1, 0, 0, -1);
        w = w.mul(&s);
        q = q.mul(&s);
    }
    let (d1, d2) = (w.a, w.d);
    debug_assert!(d1 > 0 && d2 > 0 && d2 % d1 == 0);
    let u = unimodular_inverse(&p);
    let v = unimodular_inverse(&q);
    debug_assert_eq!(u.mul(&Mat2::new(d1, 0, 0, d2)).mul(&v), *m);
    (u, d1, d2, v)
}

/// Inverse of a matrix with det = +-1.
pub fn unimodular_inverse(m: &Mat2) -> Mat2 {
    let det = m.det();
    assert!(det == 1 || det == -1, "not unimodular");
    let adj = m.adjugate();
    if det == 1 {
        adj
    } else {
        Mat2::new(-adj.a, -adj.b, -adj.c, -adj.d)
    }
}

/// Extended gcd: returns (g, x, y) with g = gcd(a, b) > 0 and ax + by = g.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            return (-a, -1, 0);
        }
        return (a, 1, 0);
    }
    let (g, x, y) = egcd(b, a.rem_euclid(b));
    // a = (a div b) * b + (a mod b) with euclidean division
    let q = (a - a.rem_euclid(b)) / b;
    (g, y, x - q * y)
}
