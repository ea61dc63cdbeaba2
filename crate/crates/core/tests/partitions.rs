use facmom::hypergeo::{falling_factorial, int, rat, Rational};
use facmom::schur::{partitions_iter, partitions_of, Partition};
use num_bigint::BigInt;

/// Counts semistandard fillings of `shape` with entries in `1..=n`, cell by cell.
fn count_ssyt(shape: &[u64], n: u64) -> u64 {
    let cells: Vec<(usize, usize)> =
        shape.iter().enumerate().flat_map(|(i, &len)| (0..len as usize).map(move |j| (i, j))).collect();
    let mut grid: Vec<Vec<u64>> = shape.iter().map(|&l| vec![0; l as usize]).collect();
    fn fill(cells: &[(usize, usize)], idx: usize, grid: &mut Vec<Vec<u64>>, n: u64) -> u64 {
        if idx == cells.len() {
            return 1;
        }
        let (i, j) = cells[idx];
        let lo_row = if j > 0 { grid[i][j - 1] } else { 1 };
        let lo_col = if i > 0 { grid[i - 1][j] + 1 } else { 1 };
        let mut total = 0;
        for v in lo_row.max(lo_col)..=n {
            grid[i][j] = v;
            total += fill(cells, idx + 1, grid, n);
        }
        grid[i][j] = 0;
        total
    }
    fill(&cells, 0, &mut grid, n)
}

/// Standard tableaux counted by removing a corner holding the largest entry.
fn count_syt(shape: &mut Vec<u64>) -> u64 {
    if shape.iter().all(|&p| p == 0) {
        return 1;
    }
    let mut total = 0;
    for i in 0..shape.len() {
        let below = shape.get(i + 1).copied().unwrap_or(0);
        if shape[i] > below {
            shape[i] -= 1;
            total += count_syt(shape);
            shape[i] += 1;
        }
    }
    total
}

/// Euler's pentagonal recurrence for p(n).
fn partition_counts(max: usize) -> Vec<i64> {
    let mut p = vec![0i64; max + 1];
    p[0] = 1;
    for n in 1..=max {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            p[n] += sign * p[n - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= n {
                p[n] += sign * p[n - g2];
            }
            k += 1;
        }
    }
    p
}

#[test]
fn hook_content_matches_tableau_enumeration() {
    for size in 0..=6 {
        for lambda in partitions_of(size, 6) {
            for n in 1..=4 {
                let expect = count_ssyt(lambda.parts(), n);
                assert_eq!(lambda.schur_at_ones(n), BigInt::from(expect), "{lambda} N={n}");
            }
        }
    }
}

#[test]
fn hook_length_matches_standard_tableaux() {
    for size in 0..=8 {
        for lambda in partitions_of(size, 8) {
            let expect = count_syt(&mut lambda.parts().to_vec());
            assert_eq!(lambda.f_lambda(), BigInt::from(expect), "{lambda}");
        }
    }
}

#[test]
fn enumeration_counts_follow_pentagonal_recurrence() {
    let p = partition_counts(15);
    for n in 0..=15u64 {
        assert_eq!(partitions_of(n, n as usize).len() as i64, p[n as usize], "n={n}");
    }
    assert_eq!(partitions_iter(6, 6).count(), 30);
    let small: Vec<String> = partitions_iter(2, 2).map(|l| l.to_string()).collect();
    assert_eq!(small, ["()", "(1)", "(2)", "(1,1)"]);
    let single_row: Vec<String> = partitions_iter(3, 1).map(|l| l.to_string()).collect();
    assert_eq!(single_row, ["()", "(1)", "(2)", "(3)"]);
}

#[test]
fn sum_of_squares_of_f_lambda() {
    // Σ_{|λ|=n} (f^λ)² = n!
    for n in 0..=9u64 {
        let total: BigInt = partitions_of(n, n as usize).iter().map(|l| l.f_lambda().pow(2)).sum();
        assert_eq!(total, facmom::hypergeo::factorial(n), "n={n}");
    }
}

#[test]
fn f_nk_from_configuration() {
    for size in 0..=5 {
        for lambda in partitions_of(size, 3) {
            for n in lambda.len().max(1) as u64..=3 {
                let x: Vec<u64> = (1..=n).map(|i| lambda.part(i as usize) + n - i).collect();
                assert_eq!(lambda.to_config(n).unwrap(), x);
                for k in 0..=3 {
                    let expect: Rational = x.iter().map(|&xi| falling_factorial(&int(xi as i64), k)).sum::<Rational>()
                        / int(n as i64);
                    assert_eq!(lambda.f_nk(n, k).unwrap(), expect, "{lambda} N={n} k={k}");
                }
            }
        }
    }
    assert_eq!(Partition::empty().f_nk(2, 1).unwrap(), rat(1, 2));
    assert_eq!(Partition::new(vec![2]).unwrap().f_nk(2, 2).unwrap(), int(3));
}
