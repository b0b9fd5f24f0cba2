//! First and second integral homology of B^(k)(e,e,n) from the cellular
//! resolution of its Garside monoid.

mod cells;
mod differential;
mod snf;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::garside::Garside;
use crate::group::Generator;

pub use cells::{enumerate_cells, Cell, CellBasis};
pub use differential::{differential_closed_form, differential_generic, Chain, GenericComplex};
pub use snf::{smith_normal_form, smith_with_transforms, AbelianGroup, IntMatrix, Smith};

/// Step budget for the recursive differential.
pub const DEFAULT_RECURSION_CAP: usize = 5_000_000;

/// Which differentials to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    Generic,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::Closed),
            "generic" => Ok(Method::Generic),
            _ => Err(Error::InvalidToken {
                token: s.to_string(),
                reason: "expected closed or generic".to_string(),
            }),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Closed => "closed",
            Method::Generic => "generic",
        })
    }
}

/// The cells up to degree 3 with d₁, d₂, d₃.
#[derive(Debug, Clone)]
pub struct Complex {
    pub basis: CellBasis,
    /// `d[r - 1]` is d_r.
    pub d: [IntMatrix; 3],
}

impl Complex {
    pub fn build(g: &Garside, method: Method, max_steps: usize) -> Result<Self> {
        let basis = CellBasis::new(g, 3)?;
        let d = match method {
            Method::Closed => [1, 2, 3].map(|r| differential_closed_form(g, &basis, r)),
            Method::Generic => {
                let mut gc = GenericComplex::new(g, &basis, max_steps);
                [1, 2, 3].map(|r| gc.augmented(r))
            }
        };
        let [d1, d2, d3] = d;
        let d = [d1?, d2?, d3?];
        for r in 1..3 {
            if !d[r - 1].mul(&d[r]).is_zero() {
                return Err(Error::TheoremViolation(format!(
                    "d{r}·d{} is not zero ({method} differentials)",
                    r + 1
                )));
            }
        }
        Ok(Complex { basis, d })
    }

    /// H_r for r ∈ {1, 2}.
    pub fn homology(&self, r: usize) -> Result<AbelianGroup> {
        if !(1..=2).contains(&r) {
            return Err(Error::Unsupported(format!("homology in degree {r}")));
        }
        homology_of(&self.d[r - 1], &self.d[r])
    }

    /// H₂ read off the ranks and the invariant factors of d₃. Valid because
    /// the kernel of d₂ is a direct summand.
    pub fn h2_shortcut(&self) -> AbelianGroup {
        let (_, rank2) = smith_normal_form(&self.d[1]);
        let c2 = self.basis.count(2);
        let mut h = AbelianGroup::cokernel(c2, &self.d[2]);
        h.free_rank -= rank2;
        h
    }
}

/// ker(d_in) / im(d_out) where `d_in · d_out = 0`.
pub fn homology_of(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<AbelianGroup> {
    let s = smith_with_transforms(d_in);
    // Columns rank.. of V span the kernel; coordinates of im(d_out) in that
    // basis are the matching rows of V⁻¹·d_out.
    let coords = s.v_inv.mul(d_out);
    for i in 0..s.rank {
        for j in 0..coords.cols() {
            if !coords[(i, j)].is_zero() {
                return Err(Error::TheoremViolation(
                    "image of the outgoing differential leaves the kernel".into(),
                ));
            }
        }
    }
    let projected = coords.rows_from(s.rank);
    Ok(AbelianGroup::cokernel(d_in.cols() - s.rank, &projected))
}

/// H_r(B^(k)(e,e,n); ℤ) for r ∈ {1, 2}.
pub fn homology_group(g: &Garside, r: usize, method: Method) -> Result<AbelianGroup> {
    Complex::build(g, method, DEFAULT_RECURSION_CAP)?.homology(r)
}

/// The closed formula for H₂ stated for n ∈ {3, 4}:
/// ℤ^{gcd(e,k)−1} × ℤ/e′ × (ℤ/2)^c, the last factor only for n = 4, with
/// e′ = e / gcd(e,k) and c = gcd(e, 2k) the number of cosets of ⟨2k⟩.
pub fn h2_formula(e: u32, n: usize, k: u32) -> Option<AbelianGroup> {
    if !(3..=4).contains(&n) || k == 0 || k >= e {
        return None;
    }
    let d = e.gcd(&k);
    let mut cyclic = vec![(e / d) as i64];
    if n == 4 {
        cyclic.extend(std::iter::repeat_n(2, e.gcd(&(2 * k)) as usize));
    }
    let mut m = IntMatrix::zeros(cyclic.len(), cyclic.len());
    for (i, &c) in cyclic.iter().enumerate() {
        m.add_to(i, i, c);
    }
    let mut h = AbelianGroup::cokernel(cyclic.len(), &m);
    h.free_rank = (d - 1) as usize;
    Some(h)
}

/// Checks that each d₃[s₃, t₀, t_j] equals v_j − v_{j+k} + v_k (or
/// v_{−k} + v_k when j = −k), where
/// v_i = [t₀,t_i] + [s₃,t₀] + [s₃,t_k] − [s₃,t_i] − [s₃,t_{i+k}].
pub fn check_v_basis(g: &Garside, complex: &Complex) -> Result<bool> {
    let e = g.params().e() as i64;
    let k = g.k() as i64;
    let basis = &complex.basis;
    let c2 = basis.count(2);
    let t = |i: i64| Generator::T(i.rem_euclid(e) as u32);
    let s3 = Generator::S(3);
    let row = |atoms: [Generator; 2]| {
        basis.index_of(&Cell { atoms: atoms.to_vec() }).ok_or_else(|| {
            Error::TheoremViolation(format!("[{},{}] is not a cell", atoms[0], atoms[1]))
        })
    };
    let v = |i: i64| -> Result<Vec<i64>> {
        let mut out = vec![0; c2];
        if i.rem_euclid(e) != 0 {
            out[row([t(0), t(i)])?] += 1;
        }
        out[row([s3, t(0)])?] += 1;
        out[row([s3, t(k)])?] += 1;
        out[row([s3, t(i)])?] -= 1;
        out[row([s3, t(i + k)])?] -= 1;
        Ok(out)
    };
    let d3 = &complex.d[2];
    for j in 1..e {
        let Some(col) = basis.index_of(&Cell { atoms: vec![s3, t(0), t(j)] }) else {
            return Ok(false);
        };
        let expected: Vec<i64> = if (j + k).rem_euclid(e) != 0 {
            let (a, b, c) = (v(j)?, v(j + k)?, v(k)?);
            (0..c2).map(|i| a[i] - b[i] + c[i]).collect()
        } else {
            let (a, c) = (v(-k)?, v(k)?);
            (0..c2).map(|i| a[i] + c[i]).collect()
        };
        if (0..c2).any(|i| d3[(i, col)] != expected[i].into()) {
            return Ok(false);
        }
    }
    Ok(true)
}
