import { describe, expect, it } from "vitest";

import type { Region } from "../src/protocol.js";
import { isAdmissible, regionOutline } from "../src/region.js";
import { loadJson } from "./replay.js";

interface Probe {
  b2: number;
  b4: number;
  inside: boolean;
}

const fixture = loadJson<{ region: Region; probes: Probe[] }>("region_probes.json");

describe("admissible-region shading", () => {
  it("matches the service slice intervals point for point", () => {
    for (const probe of fixture.probes) {
      expect(
        isAdmissible(fixture.region, probe.b2, probe.b4),
        `probe b2=${probe.b2} b4=${probe.b4}`,
      ).toBe(probe.inside);
    }
  });

  it("accepts exactly the grid interval endpoints at grid rows", () => {
    const { region } = fixture;
    for (const i of [0, Math.floor(region.k.length / 2), region.k.length - 1]) {
      const k = region.k[i];
      expect(isAdmissible(region, Math.sqrt(region.x2_min[i]), k)).toBe(true);
      expect(isAdmissible(region, Math.sqrt(region.x2_max[i]), k)).toBe(true);
      expect(isAdmissible(region, Math.sqrt(region.x2_max[i]) + 1e-6, k)).toBe(false);
    }
  });

  it("builds a closed outline with one point per grid row and side", () => {
    const outline = regionOutline(fixture.region);
    expect(outline.length).toBe(2 * fixture.region.k.length);
    for (const [b2, b4] of outline) {
      expect(Number.isFinite(b2)).toBe(true);
      expect(Number.isFinite(b4)).toBe(true);
    }
  });
});
