//! Published bound tables, used for regression diffs.

/// One cell of the size-bound table: `sdp` is the semidefinite bound and
/// `lp` the linear one (equal when only one value is listed).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundCell {
    pub n: usize,
    pub c: usize,
    pub d: usize,
    pub sdp: u64,
    pub lp: u64,
}

/// An `[[n, k, d; c]]` EA-stabilizer code shown to be optimal: the LP is
/// feasible at `d` and infeasible at `d + 1` with `M = 2^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OptimalCode {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub c: usize,
}

// Rows are "n c: entries for d = 3, 4, ..."; "a/b" means SDP a, LP b.
const TABLE: &str = "\
3 1: 2
4 1: 2 2
5 1: 4 2 2
6 1: 5 2 2 2
7 1: 9 2 2 2 2
8 1: 18 3 2 2 2 2
9 1: 32 5 2 2 2 2 2
10 1: 58 13 2 2 2 2 2 2
3 2: 3/4
4 2: 4 2/4
5 2: 8 4 2/4
6 2: 11 4 4 2/4
7 2: 19 5 4 3/4 2/4
8 2: 36 8 4 4 3/4 2/4
9 2: 67 18 4 4 4 3/4 2/4
10 2: 118 31 7 4 4 4 3/4 2/4
4 3: 8 3/8
5 3: 16 6/8 3/8
6 3: 22 8 5/8 3/8
7 3: 38 11 8 4/8 2/8
8 3: 73 18 8 8 4/8 2/8
9 3: 140 36 9 8 8 4/8 2/8
10 3: 237 70 16 8 8 7/8 4/8 3/8
5 4: 32 10/16 3/16
6 4: 44 16 7/16 3/16
7 4: 76 22 15/16 5/16 3/16
8 4: 146 38 16 12/16 5/16 3/16
9 4: 289 72/73 19 16 10/16 4/16 3/16
10 4: 475 140/144 33 16 16 9/10 4/16 3/16
6 5: 89 31/32 8/32 3/32
7 5: 153 45 20/32 6/32 3/32
8 5: 292 76 32 16/32 5/32 3/32
9 5: 585 145/146 32 32 13/32 5/32 3/32
7 6: 307 90 28/64 7/64 3/64
8 6: 585 153 64 20/64 6/64 3/64
9 6: 1170 290/292 64 51/64 17/64 5/64 3/64
8 7: 1170 306/307 112/128 26/128 6/128 3/128
9 7: 2340 581/585 153 74/128 22/128 6/128 3/128
9 8: 4681 1164/1170 307 96/256 24/256 6/256 3/256
";

pub const OPTIMAL_CODES: [OptimalCode; 9] = [
    OptimalCode { n: 7, k: 4, d: 3, c: 3 },
    OptimalCode { n: 8, k: 5, d: 3, c: 3 },
    OptimalCode { n: 9, k: 4, d: 5, c: 5 },
    OptimalCode { n: 9, k: 5, d: 3, c: 2 },
    OptimalCode { n: 9, k: 5, d: 4, c: 4 },
    OptimalCode { n: 9, k: 6, d: 3, c: 3 },
    OptimalCode { n: 10, k: 3, d: 4, c: 2 },
    OptimalCode { n: 10, k: 4, d: 4, c: 2 },
    OptimalCode { n: 10, k: 6, d: 3, c: 2 },
];

/// All cells of the size-bound table, row by row.
pub fn bound_table() -> Vec<BoundCell> {
    let mut out = Vec::new();
    for line in TABLE.lines() {
        let (head, body) = line.split_once(':').expect("table row");
        let mut h = head.split_whitespace().map(|v| v.parse::<usize>().unwrap());
        let (n, c) = (h.next().unwrap(), h.next().unwrap());
        for (k, entry) in body.split_whitespace().enumerate() {
            let (sdp, lp) = match entry.split_once('/') {
                Some((a, b)) => (a.parse().unwrap(), b.parse().unwrap()),
                None => {
                    let v = entry.parse().unwrap();
                    (v, v)
                }
            };
            out.push(BoundCell { n, c, d: 3 + k, sdp, lp });
        }
    }
    out
}

pub fn lookup(n: usize, c: usize, d: usize) -> Option<BoundCell> {
    bound_table().into_iter().find(|b| b.n == n && b.c == c && b.d == d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        let t = bound_table();
        assert_eq!(t.len(), 200);
        assert!(t.iter().all(|b| b.sdp <= b.lp && b.d <= b.n));
        assert_eq!(lookup(3, 2, 3), Some(BoundCell { n: 3, c: 2, d: 3, sdp: 3, lp: 4 }));
        assert_eq!(lookup(10, 4, 8).map(|b| (b.sdp, b.lp)), Some((9, 10)));
        assert_eq!(lookup(3, 1, 4), None);
    }
}
