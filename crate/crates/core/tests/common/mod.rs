//! Brute-force reference tables, written straight from the defining
//! recursions and sharing no code with the library.

#![allow(dead_code)]

/// `A'_n` as a dense `(2^n + 1) x (2^n + 1)` array indexed by `[a][b]`,
/// with index 0 unused. Rows are filled from `a = 2^n` downwards, since
/// `a * b > a` for `a < 2^n`.
pub struct Forward {
    pub n: u32,
    size: usize,
    cells: Vec<u64>,
}

impl Forward {
    pub fn new(n: u32) -> Self {
        let top = 1usize << n;
        let size = top + 1;
        let mut cells = vec![0u64; size * size];
        for b in 1..=top {
            cells[top * size + b] = b as u64;
        }
        for a in (1..top).rev() {
            cells[a * size + 1] = a as u64 + 1;
            for b in 1..top {
                let ab = cells[a * size + b] as usize;
                cells[a * size + b + 1] = cells[ab * size + a + 1];
            }
        }
        Forward { n, size, cells }
    }

    pub fn top(&self) -> u64 {
        1 << self.n
    }

    pub fn star(&self, a: u64, b: u64) -> u64 {
        self.cells[a as usize * self.size + b as usize]
    }

    pub fn row(&self, a: u64) -> Vec<u64> {
        (1..=self.top()).map(|b| self.star(a, b)).collect()
    }

    pub fn period(&self, a: u64) -> u64 {
        (1..=self.top()).find(|&b| self.star(a, b) == self.top()).unwrap()
    }

    /// 0-based product in `A_n`.
    pub fn star_zero(&self, a: u64, b: u64) -> u64 {
        let top = self.top();
        let up = |v: u64| if v == 0 { top } else { v };
        self.star(up(a), up(b)) % top
    }
}

/// `B_n` as a dense `2^n x 2^n` array, from `0 \ y = y`,
/// `x \ (2^n - 1) = x - 1`, `x \ (y - 1) = (x \ y) \ (x - 1)`.
pub struct Backward {
    pub n: u32,
    cells: Vec<u64>,
}

impl Backward {
    pub fn new(n: u32) -> Self {
        let size = 1usize << n;
        let mut cells = vec![0u64; size * size];
        for y in 0..size {
            cells[y] = y as u64;
        }
        for x in 1..size {
            cells[x * size + size - 1] = x as u64 - 1;
            for y in (1..size).rev() {
                let u = cells[x * size + y] as usize;
                cells[x * size + y - 1] = cells[u * size + x - 1];
            }
        }
        Backward { n, cells }
    }

    pub fn bs(&self, x: u64, y: u64) -> u64 {
        self.cells[((x << self.n) + y) as usize]
    }

    pub fn row(&self, x: u64) -> Vec<u64> {
        let size = 1u64 << self.n;
        let p = (1..size).find(|&l| self.bs(x, l) == 0).unwrap_or(size);
        (0..p).map(|i| self.bs(x, i)).collect()
    }
}

/// Value of `j_m = j j ... j` in `A_n` (0-based), multiplying out.
pub fn left_power(f: &Forward, m: u64) -> u64 {
    let mut v = 1 % f.top();
    for _ in 1..m {
        v = f.star_zero(v, 1 % f.top());
    }
    v
}

/// Value of `j^(m) = j(j(...(j)))` with `m + 1` generators, in `A_n`.
pub fn tower(f: &Forward, m: u64) -> u64 {
    let one = 1 % f.top();
    let mut v = one;
    for _ in 0..m {
        v = f.star_zero(one, v);
    }
    v
}

/// Largest `n <= cap` with `value(n) = 0`, or `None` if it is zero at the cap.
pub fn largest_zero_level(cap: u32, value: impl Fn(u32) -> u64) -> Option<u32> {
    if value(cap) == 0 {
        return None;
    }
    (0..=cap).rev().find(|&n| value(n) == 0)
}

/// 2-adic valuation by repeated halving.
pub fn two_adic(mut m: u64) -> u32 {
    let mut v = 0;
    while m % 2 == 0 {
        m /= 2;
        v += 1;
    }
    v
}
