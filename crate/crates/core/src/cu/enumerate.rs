use std::collections::HashSet;

use super::FiniteMonoid;

const UNSET: u8 = u8::MAX;

struct Search {
    n: usize,
    table: Vec<u8>,
    pairs: Vec<(usize, usize)>,
    out: Vec<Vec<u8>>,
}

impl Search {
    fn get(&self, a: usize, b: usize) -> u8 {
        self.table[a * self.n + b]
    }

    fn set(&mut self, a: usize, b: usize, v: u8) {
        let n = self.n;
        self.table[a * n + b] = v;
        self.table[b * n + a] = v;
    }

    fn associative_so_far(&self, a: usize, b: usize) -> bool {
        // Only triples touching the entry just set can have changed.
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if x != a && x != b && y != a && y != b && z != a && z != b {
                        continue;
                    }
                    let xy = self.get(x, y);
                    let yz = self.get(y, z);
                    if xy == UNSET || yz == UNSET {
                        continue;
                    }
                    let l = self.get(xy as usize, z);
                    let r = self.get(x, yz as usize);
                    if l != UNSET && r != UNSET && l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize) {
        if k == self.pairs.len() {
            self.out.push(self.table.clone());
            return;
        }
        let (a, b) = self.pairs[k];
        // A nonzero sum of nonzero elements: zero would make them invertible.
        for v in 1..self.n as u8 {
            self.set(a, b, v);
            if self.associative_so_far(a, b) {
                self.run(k + 1);
            }
        }
        self.set(a, b, UNSET);
    }
}

fn algebraic_order(table: &[u8], n: usize) -> Vec<Vec<bool>> {
    let mut leq = vec![vec![false; n]; n];
    for x in 0..n {
        for z in 0..n {
            leq[x][table[x * n + z] as usize] = true;
        }
    }
    leq
}

fn canonical(table: &[u8], n: usize, perms: &[Vec<usize>]) -> Vec<u8> {
    let mut best: Option<Vec<u8>> = None;
    for p in perms {
        // p[old] = new.
        let mut t = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                t[p[a] * n + p[b]] = p[table[a * n + b] as usize] as u8;
            }
        }
        if best.as_ref().is_none_or(|bst| t < *bst) {
            best = Some(t);
        }
    }
    best.expect("at least one permutation")
}

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(1, &mut cur, &mut out);
    out
}

/// Partial orders extending `base` that keep addition monotone.
fn compatible_orders(table: &[u8], n: usize, base: &[Vec<bool>]) -> Vec<Vec<Vec<bool>>> {
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| x != y && !base[x][y] && !base[y][x])
        .collect();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut leq = base.to_vec();
    fn closed(leq: &[Vec<bool>], table: &[u8], n: usize) -> bool {
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return false;
                }
                for z in 0..n {
                    if leq[x][y] && leq[y][z] && !leq[x][z] {
                        return false;
                    }
                    if leq[x][y] && !leq[table[x * n + z] as usize][table[y * n + z] as usize] {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn rec(
        k: usize,
        free: &[(usize, usize)],
        leq: &mut Vec<Vec<bool>>,
        table: &[u8],
        n: usize,
        out: &mut Vec<Vec<Vec<bool>>>,
        seen: &mut HashSet<Vec<Vec<bool>>>,
    ) {
        if k == free.len() {
            if closed(leq, table, n) && seen.insert(leq.clone()) {
                out.push(leq.clone());
            }
            return;
        }
        let (x, y) = free[k];
        rec(k + 1, free, leq, table, n, out, seen);
        if !leq[y][x] {
            leq[x][y] = true;
            rec(k + 1, free, leq, table, n, out, seen);
            leq[x][y] = false;
        }
    }
    rec(0, &free, &mut leq, table, n, &mut out, &mut seen);
    out
}

/// Every positively ordered commutative monoid with `n` elements, up to
/// isomorphism of the addition table. With `all_orders` each table carries
/// every compatible positive order, otherwise only its algebraic order.
pub fn enumerate_monoids(n: usize, all_orders: bool) -> Vec<FiniteMonoid> {
    assert!((1..=8).contains(&n), "enumeration is limited to 1..=8 elements");
    let mut table = vec![UNSET; n * n];
    for x in 0..n {
        table[x] = x as u8;
        table[x * n] = x as u8;
    }
    let pairs = (1..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let mut s = Search {
        n,
        table,
        pairs,
        out: Vec::new(),
    };
    s.run(0);
    let perms = permutations_fixing_zero(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in s.out {
        let base = algebraic_order(&t, n);
        if (0..n).any(|x| (0..n).any(|y| x != y && base[x][y] && base[y][x])) {
            continue;
        }
        if !seen.insert(canonical(&t, n, &perms)) {
            continue;
        }
        let add: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| t[a * n + b] as usize).collect()).collect();
        let orders = if all_orders {
            compatible_orders(&t, n, &base)
        } else {
            vec![base]
        };
        for (k, leq) in orders.into_iter().enumerate() {
            let idx = out.len();
            let labels = (0..n).map(|i| i.to_string()).collect();
            let m = FiniteMonoid::new(&format!("M{n}.{idx}.{k}"), labels, add.clone(), leq, 0)
                .expect("enumerated tables are positively ordered monoids");
            out.push(m);
        }
    }
    out
}

fn capped(k: usize) -> FiniteMonoid {
    let add = (0..=k).map(|x| (0..=k).map(|y| (x + y).min(k)).collect()).collect();
    FiniteMonoid::with_algebraic_order(&format!("N capped at {k}"), add, 0).unwrap()
}

fn max_chain(k: usize) -> FiniteMonoid {
    let add = (0..=k).map(|x| (0..=k).map(|y| x.max(y)).collect()).collect();
    FiniteMonoid::with_algebraic_order(&format!("max-chain {k}"), add, 0).unwrap()
}

/// `{0, 1, ..., k, ∞}` where every sum of nonzero elements is `∞`.
fn flat(k: usize) -> FiniteMonoid {
    let top = k + 1;
    let add = (0..=top)
        .map(|x| (0..=top).map(|y| if x == 0 { y } else if y == 0 { x } else { top }).collect())
        .collect();
    let mut m = FiniteMonoid::with_algebraic_order(&format!("flat {k}"), add, 0).unwrap();
    m.labels[top] = "inf".into();
    m
}

fn product(a: &FiniteMonoid, b: &FiniteMonoid) -> FiniteMonoid {
    let (p, q) = (a.len(), b.len());
    let n = p * q;
    let pair = |i: usize| (i / q, i % q);
    let add = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let ((x, y), (u, v)) = (pair(i), pair(j));
                    a.sum(x, u).unwrap() * q + b.sum(y, v).unwrap()
                })
                .collect()
        })
        .collect();
    let leq = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let ((x, y), (u, v)) = (pair(i), pair(j));
                    a.leq(x, u) && b.leq(y, v)
                })
                .collect()
        })
        .collect();
    let labels = (0..n)
        .map(|i| format!("({},{})", a.labels[pair(i).0], b.labels[pair(i).1]))
        .collect();
    FiniteMonoid::new(&format!("{} x {}", a.name, b.name), labels, add, leq, a.zero * q + b.zero).unwrap()
}

/// Named families with up to `max` elements: capped and max-chains, flat
/// monoids, and products of smaller members.
pub fn structured_corpus(max: usize) -> Vec<FiniteMonoid> {
    let mut base = Vec::new();
    for k in 1..max {
        base.push(capped(k));
        base.push(max_chain(k));
        if k + 2 <= max {
            base.push(flat(k));
        }
    }
    let mut out = base.clone();
    for (i, a) in base.iter().enumerate() {
        for b in &base[i..] {
            if a.len() * b.len() <= max {
                out.push(product(a, b));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        // Trivial, then the two two-element monoids {0,1} with 1+1 = 1.
        assert_eq!(enumerate_monoids(1, true).len(), 1);
        let two = enumerate_monoids(2, true);
        assert_eq!(two.len(), 1);
        assert!(enumerate_monoids(3, true).len() > enumerate_monoids(3, false).len() - 1);
    }

    #[test]
    fn corpus_is_valid() {
        let c = structured_corpus(8);
        assert!(c.iter().all(|m| m.len() <= 8 && m.validate().is_ok()));
        assert!(c.iter().any(|m| m.len() == 8));
    }
}
