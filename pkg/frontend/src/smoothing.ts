/** Gaussian kernel smoothing of gridded densities. */

/** Discrete Gaussian kernel, normalized to sum 1; sigma in cell units. */
export function gaussianKernel(sigma: number): number[] {
  if (sigma <= 0) return [1];
  const half = Math.max(1, Math.ceil(3 * sigma));
  const k: number[] = [];
  let total = 0;
  for (let i = -half; i <= half; i++) {
    const v = Math.exp(-(i * i) / (2 * sigma * sigma));
    k.push(v);
    total += v;
  }
  return k.map((v) => v / total);
}

function convolveAxis(grid: number[][], kernel: number[], axis: 0 | 1): number[][] {
  const nx = grid.length;
  const ny = grid[0].length;
  const half = (kernel.length - 1) / 2;
  const out = grid.map((col) => col.slice());
  for (let i = 0; i < nx; i++) {
    for (let j = 0; j < ny; j++) {
      let acc = 0;
      for (let t = 0; t < kernel.length; t++) {
        const off = t - half;
        const ii = axis === 0 ? i + off : i;
        const jj = axis === 1 ? j + off : j;
        if (ii >= 0 && ii < nx && jj >= 0 && jj < ny) {
          acc += kernel[t] * grid[ii][jj];
        }
      }
      out[i][j] = acc;
    }
  }
  return out;
}

/** Separable Gaussian blur; sigma in cell units.  Mass leaks only at the
 * boundary (the kernel is truncated there). */
export function smoothGrid(grid: number[][], sigma: number): number[][] {
  if (sigma <= 0) return grid.map((col) => col.slice());
  const k = gaussianKernel(sigma);
  return convolveAxis(convolveAxis(grid, k, 0), k, 1);
}

/**
 * Silverman-style bandwidth (data units) for a mass-weighted cell sample:
 * h = sigma_hat * n_eff^(-1/6), with the effective sample size
 * (sum m)^2 / sum m^2.  The simulator does not publish its per-point
 * weight through the planar schema, so the effective size stands in for
 * the raw count; exact replication of any reference smoothing is a
 * non-goal.
 */
export function silvermanBandwidth(xs: number[], ys: number[], density: number[][]): number {
  let m0 = 0;
  let m2 = 0;
  let sx = 0;
  let sy = 0;
  let sxx = 0;
  let syy = 0;
  for (let i = 0; i < xs.length; i++) {
    for (let j = 0; j < ys.length; j++) {
      const m = density[i][j];
      if (m <= 0) continue;
      m0 += m;
      m2 += m * m;
      sx += m * xs[i];
      sy += m * ys[j];
      sxx += m * xs[i] * xs[i];
      syy += m * ys[j] * ys[j];
    }
  }
  if (m0 <= 0) return 0;
  const varX = sxx / m0 - (sx / m0) ** 2;
  const varY = syy / m0 - (sy / m0) ** 2;
  const sigma = Math.sqrt(Math.max(varX + varY, 0) / 2);
  const nEff = (m0 * m0) / m2;
  return sigma * Math.pow(nEff, -1 / 6);
}
