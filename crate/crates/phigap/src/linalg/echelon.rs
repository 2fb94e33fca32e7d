use crate::scalar::Scalar;

/// A fixed-width scalar ran out of range during a row operation.
///
/// Arbitrary-precision instantiations never produce this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

/// Divide a row by the gcd of its entries and make the leading entry
/// positive. The zero row is left untouched.
pub(crate) fn primitivize<S: Scalar>(row: &mut [S]) {
    let mut g = S::zero();
    for e in row.iter() {
        if !e.is_zero() {
            g = g.gcd(e);
        }
    }
    if g.is_zero() {
        return;
    }
    let lead_negative = row
        .iter()
        .find(|e| !e.is_zero())
        .map(|e| e.is_negative())
        .unwrap_or(false);
    if lead_negative {
        g = -g;
    }
    if !g.is_one() {
        for e in row.iter_mut() {
            *e = e.clone() / g.clone();
        }
    }
}

fn leading_col<S: Scalar>(row: &[S]) -> Option<usize> {
    row.iter().position(|e| !e.is_zero())
}

/// `row = (p/g) * row - (c/g) * pivot_row` with `g = gcd(p, c)`, where `p`
/// is the pivot value and `c` the entry of `row` at the pivot column.
fn eliminate<S: Scalar>(row: &mut [S], pivot_row: &[S], col: usize) -> Result<(), Overflow> {
    let p = pivot_row[col].clone();
    let c = row[col].clone();
    debug_assert!(!p.is_zero() && !c.is_zero());
    let g = p.gcd(&c);
    let mp = p / g.clone();
    let mc = c / g;
    for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
        *x = S::combine(&mp, x, &mc, y).ok_or(Overflow)?;
    }
    debug_assert!(row[col].is_zero());
    Ok(())
}

/// Incremental row-echelon basis with stack discipline.
///
/// Rows are primitive and have pairwise distinct leading columns. Rows are
/// kept in insertion order so the most recent insertions can be popped,
/// which is what the subset search leans on.
#[derive(Debug, Clone)]
pub(crate) struct Echelon<S: Scalar> {
    cols: usize,
    rows: Vec<Vec<S>>,
    pivot_of_col: Vec<Option<usize>>,
}

impl<S: Scalar> Echelon<S> {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: Vec::new(),
            pivot_of_col: vec![None; cols],
        }
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    /// Reduce `v` against the current rows; the remainder is primitive or
    /// zero.
    pub fn reduce(&self, mut v: Vec<S>) -> Result<Vec<S>, Overflow> {
        debug_assert_eq!(v.len(), self.cols);
        while let Some(col) = leading_col(&v) {
            match self.pivot_of_col[col] {
                Some(r) => eliminate(&mut v, &self.rows[r], col)?,
                None => break,
            }
        }
        primitivize(&mut v);
        Ok(v)
    }

    /// Insert a vector; returns the pivot column of the stored primitive
    /// remainder when it was independent of the current rows. The stored
    /// row is `rows().last()`.
    pub fn insert(&mut self, v: Vec<S>) -> Result<Option<usize>, Overflow> {
        let v = self.reduce(v)?;
        match leading_col(&v) {
            None => Ok(None),
            Some(col) => {
                self.pivot_of_col[col] = Some(self.rows.len());
                self.rows.push(v);
                Ok(Some(col))
            }
        }
    }

    pub fn contains(&self, v: &[S]) -> Result<bool, Overflow> {
        Ok(leading_col(&self.reduce(v.to_vec())?).is_none())
    }

    /// Remove the most recently inserted row.
    pub fn pop_row(&mut self) {
        let row = self.rows.pop().expect("pop on empty echelon");
        let col = leading_col(&row).expect("stored rows are nonzero");
        self.pivot_of_col[col] = None;
    }
}

/// Unique integer-scaled reduced echelon form of the span of `rows`:
/// rows fully reduced against each other, primitive, positive leading
/// entries, sorted by leading column.
pub(crate) fn canonical_rows<S: Scalar>(cols: usize, rows: Vec<Vec<S>>) -> Vec<Vec<S>> {
    let mut ech = Echelon::new(cols);
    for r in rows {
        ech.insert(r).expect("scalar overflow while canonicalizing");
    }
    let mut rows = ech.rows;
    rows.sort_by_key(|r| leading_col(r).unwrap());
    // Back-eliminate so each pivot column is zero in every other row.
    for i in (0..rows.len()).rev() {
        let col = leading_col(&rows[i]).unwrap();
        let pivot = rows[i].clone();
        for (j, row) in rows.iter_mut().enumerate() {
            if j != i && !row[col].is_zero() {
                eliminate(row, &pivot, col).expect("scalar overflow while canonicalizing");
                primitivize(row);
            }
        }
    }
    rows
}
