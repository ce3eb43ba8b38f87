use super::MultiPoly;
use crate::error::{check_budget, Error, Result};
use crate::ff::{Field, FieldElement};

/// Points enumerated per extension degree before the search gives up on it.
const SEARCH_BUDGET: u64 = 1 << 24;

/// A common zero found over `F_{q^e}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroWitness {
    pub ext_degree: u32,
    pub field: Field,
    pub point: Vec<FieldElement>,
}

impl ZeroWitness {
    /// Point coordinates in the text form of the extension field.
    pub fn formatted_point(&self) -> Vec<String> {
        self.point.iter().map(|&x| self.field.format(x)).collect()
    }
}

/// Looks for a common zero of `gens` over `F_{q^e}` for `e = 1..=max_ext`,
/// returning one from the smallest degree that has any. `None` is
/// inconclusive: it cannot prove that no zero exists.
pub fn common_zero_search(gens: &[MultiPoly], max_ext: u32) -> Result<Option<ZeroWitness>> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let base = first.field().clone();
    let nvars = first.nvars();
    if gens.iter().any(|g| g.nvars() != nvars) {
        return Err(Error::ArityMismatch { expected: nvars, found: 0 });
    }
    for e in 1..=max_ext.max(1) {
        let size = (base.order() as u64).checked_pow(e);
        let Some(size) = size else { break };
        let Some(points) = size.checked_pow(nvars as u32) else { continue };
        if points > SEARCH_BUDGET || size > crate::ff::MAX_FIELD_SIZE {
            continue;
        }
        let (big, images) = base.extension(e)?;
        let lifted: Vec<MultiPoly> = gens.iter().map(|g| g.map_coeffs(&big, &images)).collect();
        let q = big.order();
        let mut idx = vec![0u32; nvars];
        loop {
            if lifted.iter().all(|g| g.eval_raw(&idx) == 0) {
                let point = idx.iter().map(|&v| big.element_unchecked(v)).collect();
                return Ok(Some(ZeroWitness { ext_degree: e, field: big, point }));
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == nvars {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < q {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == nvars {
                break;
            }
        }
    }
    Ok(None)
}

/// Number of zeros of `f` in `F_q^k`, by exhaustion.
pub fn zero_count(f: &MultiPoly, budget: u64) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = f.field().order() as u64;
    let k = f.nvars();
    check_budget((q as u128).pow(k as u32), budget)?;
    let mut idx = vec![0u32; k];
    let mut count = 0;
    loop {
        if f.eval_raw(&idx) == 0 {
            count += 1;
        }
        let mut pos = 0;
        while pos < k {
            idx[pos] += 1;
            if (idx[pos] as u64) < q {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == k {
            break;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn search_examples() {
        let f5 = Field::prime(5).unwrap();
        let gens = vec![
            parse_poly(&f5, "x1+x2", Some(2)).unwrap(),
            parse_poly(&f5, "x1*x2", Some(2)).unwrap(),
        ];
        let w = common_zero_search(&gens, 1).unwrap().unwrap();
        assert_eq!(w.ext_degree, 1);
        assert_eq!(w.point, vec![f5.zero(), f5.zero()]);

        let f3 = Field::prime(3).unwrap();
        let g = vec![parse_poly(&f3, "x1^2+1", Some(1)).unwrap()];
        let w = common_zero_search(&g, 2).unwrap().unwrap();
        assert_eq!(w.ext_degree, 2);
        assert_eq!(w.field.order(), 9);
        let x = w.point[0];
        assert_eq!(w.field.add(w.field.mul(x, x), w.field.one()), w.field.zero());

        let h = vec![
            parse_poly(&f3, "x1", Some(1)).unwrap(),
            parse_poly(&f3, "x1+1", Some(1)).unwrap(),
        ];
        assert_eq!(common_zero_search(&h, 3).unwrap(), None);
        assert!(matches!(common_zero_search(&[], 2), Err(Error::EmptyGenerators)));
    }

    #[test]
    fn search_over_extension_base() {
        // x^2 - c for a non-square c of F_9 needs F_81
        let f9 = Field::parse("9").unwrap();
        let t = MultiPoly::constant(&f9, 1, f9.nonsquare());
        let x = MultiPoly::var(&f9, 1, 0);
        let g = &(&x * &x) - &t;
        let w = common_zero_search(std::slice::from_ref(&g), 2).unwrap().unwrap();
        assert_eq!(w.ext_degree, 2);
    }

    #[test]
    fn zero_count_examples() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(zero_count(&parse_poly(&f5, "x1", Some(2)).unwrap(), 1 << 20).unwrap(), 5);
        assert_eq!(zero_count(&parse_poly(&f5, "x1*x2", None).unwrap(), 1 << 20).unwrap(), 9);
        let f7 = Field::prime(7).unwrap();
        assert_eq!(zero_count(&parse_poly(&f7, "x1^2+x2^2", None).unwrap(), 1 << 20).unwrap(), 1);
        assert!(matches!(
            zero_count(&parse_poly(&f7, "x1^2+x2^2", None).unwrap(), 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
