/**
 * Admissible-region queries over the service's slice-interval grid.
 *
 * The service samples the admissible diagonal interval and reports, for
 * each grid value of b4, the closed interval of squared diagonals x2 over
 * which a convex configuration exists. Membership at a grid row is exact;
 * between rows the interval bounds are interpolated linearly.
 */

import type { Region } from "./protocol.js";

export function isAdmissible(region: Region, b2: number, b4: number): boolean {
  const ks = region.k;
  if (ks.length === 0 || b4 < ks[0] || b4 > ks[ks.length - 1]) return false;
  const x2 = b2 * b2;
  let hi = ks.findIndex((k) => k >= b4);
  if (hi < 0) return false;
  if (hi === 0 || ks[hi] === b4) {
    return region.x2_min[hi] <= x2 && x2 <= region.x2_max[hi];
  }
  const lo = hi - 1;
  const u = (b4 - ks[lo]) / (ks[hi] - ks[lo]);
  const x2min = region.x2_min[lo] + u * (region.x2_min[hi] - region.x2_min[lo]);
  const x2max = region.x2_max[lo] + u * (region.x2_max[hi] - region.x2_max[lo]);
  return x2min <= x2 && x2 <= x2max;
}

/**
 * Closed outline of the region in (b2, b4) coordinates: down the lower
 * boundary, back along the upper one. Suitable for an SVG path.
 */
export function regionOutline(region: Region): Array<[number, number]> {
  const down: Array<[number, number]> = [];
  const up: Array<[number, number]> = [];
  for (let i = 0; i < region.k.length; i++) {
    down.push([Math.sqrt(region.x2_min[i]), region.k[i]]);
    up.push([Math.sqrt(region.x2_max[i]), region.k[i]]);
  }
  up.reverse();
  return [...down, ...up];
}
