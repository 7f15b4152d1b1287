/**
 * Pure SVG geometry builders. No DOM access here; main.ts assigns the
 * returned attribute strings to elements.
 */

export interface Viewport {
  width: number;
  height: number;
  pad: number;
}

export interface Fit {
  scale: number;
  tx: number;
  ty: number;
}

/** Map world coordinates into the viewport, preserving aspect, y up. */
export function fitPoints(points: Array<[number, number]>, vp: Viewport): Fit {
  let xmin = Infinity, xmax = -Infinity, ymin = Infinity, ymax = -Infinity;
  for (const [x, y] of points) {
    xmin = Math.min(xmin, x);
    xmax = Math.max(xmax, x);
    ymin = Math.min(ymin, y);
    ymax = Math.max(ymax, y);
  }
  const w = Math.max(xmax - xmin, 1e-9);
  const h = Math.max(ymax - ymin, 1e-9);
  const scale = Math.min((vp.width - 2 * vp.pad) / w, (vp.height - 2 * vp.pad) / h);
  const tx = vp.pad - xmin * scale + 0.5 * (vp.width - 2 * vp.pad - w * scale);
  const ty = vp.height - vp.pad + ymin * scale - 0.5 * (vp.height - 2 * vp.pad - h * scale);
  return { scale, tx, ty };
}

export function project(fit: Fit, x: number, y: number): [number, number] {
  return [fit.tx + fit.scale * x, fit.ty - fit.scale * y];
}

/** "x0,y0 x1,y1 ..." for an SVG polygon. */
export function polygonPoints(vertices: number[][], fit: Fit): string {
  return vertices
    .map(([x, y]) => project(fit, x, y).map((v) => v.toFixed(2)).join(","))
    .join(" ");
}

/** SVG path through a list of world points. */
export function pathThrough(points: Array<[number, number]>, fit: Fit): string {
  if (points.length === 0) return "";
  const cmds = points.map(([x, y], i) => {
    const [px, py] = project(fit, x, y);
    return `${i === 0 ? "M" : "L"}${px.toFixed(2)} ${py.toFixed(2)}`;
  });
  return cmds.join(" ") + " Z";
}
