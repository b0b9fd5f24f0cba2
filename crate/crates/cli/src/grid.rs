//! Parameter points and the default grid.

use std::fmt;

use interval_garside::GroupParams;

/// Largest group handled by the default grid.
pub const GRID_GROUP_LIMIT: u128 = 100_000;
/// Largest |D_k|² for which all pairs are checked for meets and joins.
pub const LATTICE_PAIR_LIMIT: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub e: u32,
    pub n: usize,
    pub k: u32,
}

impl Point {
    pub fn params(&self) -> GroupParams {
        GroupParams::new(self.e, self.n).expect("grid points are valid")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e={} n={} k={}", self.e, self.n, self.k)
    }
}

/// e ∈ 2..=6, n ∈ 2..=4, every k, dropping groups above the size limit.
pub fn default_grid() -> Vec<Point> {
    let mut out = Vec::new();
    for e in 2..=6u32 {
        for n in 2..=4usize {
            let params = GroupParams::new(e, n).expect("valid");
            if params.order().is_none_or(|o| o > GRID_GROUP_LIMIT) {
                continue;
            }
            out.extend((1..e).map(|k| Point { e, n, k }));
        }
    }
    out
}

/// The default grid restricted by optional e, n, k filters.
pub fn select(e: Option<u32>, n: Option<usize>, k: Option<u32>) -> Result<Vec<Point>, String> {
    if let (Some(e), Some(n)) = (e, n) {
        GroupParams::new(e, n).map_err(|err| err.to_string())?;
        if let Some(k) = k {
            if k == 0 || k >= e {
                return Err(format!("k must satisfy 1 <= k <= e-1, got k={k} for e={e}"));
            }
            return Ok(vec![Point { e, n, k }]);
        }
        return Ok((1..e).map(|k| Point { e, n, k }).collect());
    }
    Ok(default_grid()
        .into_iter()
        .filter(|p| e.is_none_or(|e| p.e == e))
        .filter(|p| n.is_none_or(|n| p.n == n))
        .filter(|p| k.is_none_or(|k| p.k == k))
        .collect())
}

/// Parses `"e,n,k;e,n,k"`. The empty string is the empty grid.
pub fn parse_points(s: &str) -> Result<Vec<Point>, String> {
    s.split(';')
        .map(str::trim)
        .filter(|part| !part.is_empty())
        .map(|part| {
            let fields: Vec<&str> = part.split(',').map(str::trim).collect();
            let [e, n, k] = fields[..] else {
                return Err(format!("expected e,n,k but got {part:?}"));
            };
            let bad = |what: &str| format!("invalid {what} in {part:?}");
            let point = Point {
                e: e.parse().map_err(|_| bad("e"))?,
                n: n.parse().map_err(|_| bad("n"))?,
                k: k.parse().map_err(|_| bad("k"))?,
            };
            select(Some(point.e), Some(point.n), Some(point.k))?;
            Ok(point)
        })
        .collect()
}

/// Distinct (e, n) pairs of a point list, in order of first appearance.
pub fn group_pairs(points: &[Point]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for p in points {
        if !out.contains(&(p.e, p.n)) {
            out.push((p.e, p.n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let grid = default_grid();
        // Σ_{e=2}^{6} (e−1) = 15 values of (e, k), three ranks each.
        assert_eq!(grid.len(), 45);
        assert!(grid.contains(&Point { e: 6, n: 4, k: 5 }));
    }

    #[test]
    fn point_lists() {
        assert_eq!(parse_points("").unwrap(), vec![]);
        assert_eq!(
            parse_points("3,3,1; 4,3,2").unwrap(),
            vec![Point { e: 3, n: 3, k: 1 }, Point { e: 4, n: 3, k: 2 }]
        );
        assert!(parse_points("3,3").is_err());
        assert!(parse_points("3,3,3").is_err());
    }

    #[test]
    fn filters() {
        assert_eq!(select(Some(3), Some(3), None).unwrap().len(), 2);
        assert_eq!(select(None, Some(2), None).unwrap().len(), 15);
        assert!(select(Some(3), Some(3), Some(0)).is_err());
    }
}
