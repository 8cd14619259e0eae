import * as fs from "fs";
import * as path from "path";

import { CsvFormatError, loadSweepCsv, SweepRow } from "./csv";
import { lineChartSvg, Series } from "./svg";

export const METRICS = ["uav", "terrestrial", "network"] as const;
export type Metric = (typeof METRICS)[number];
export type DirectionFilter = "ul" | "dl" | "both";

const DIRECTION_NAMES: Record<Exclude<DirectionFilter, "both">, string> = {
  ul: "uplink",
  dl: "downlink",
};

const SCHEME_COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

const METRIC_FIELDS: Record<Metric, { mean: keyof SweepRow; se: keyof SweepRow; label: string }> = {
  uav: { mean: "uavMean", se: "uavSe", label: "UAV sum-rate" },
  terrestrial: { mean: "terrMean", se: "terrSe", label: "terrestrial UE sum-rate" },
  network: { mean: "netMean", se: "netSe", label: "network sum-rate" },
};

export function seriesForPanel(rows: SweepRow[], direction: string, metric: Metric): Series[] {
  const fields = METRIC_FIELDS[metric];
  const schemes = [...new Set(rows.filter((r) => r.direction === direction).map((r) => r.scheme))];
  schemes.sort((a, b) => a - b);
  return schemes.map((scheme, i) => {
    const points = rows
      .filter((r) => r.direction === direction && r.scheme === scheme)
      .sort((a, b) => a.nUes - b.nUes)
      .map((r) => ({
        x: r.nUes,
        y: r[fields.mean] as number,
        se: r[fields.se] as number,
      }));
    return {
      label: `scheme ${scheme}`,
      color: SCHEME_COLORS[i % SCHEME_COLORS.length],
      points,
    };
  });
}

export function renderFigures(
  csvPath: string,
  outPrefix: string,
  direction: DirectionFilter = "both"
): string[] {
  const rows = loadSweepCsv(csvPath);
  const wanted =
    direction === "both"
      ? [DIRECTION_NAMES.ul, DIRECTION_NAMES.dl]
      : [DIRECTION_NAMES[direction]];
  const present = new Set(rows.map((r) => r.direction));
  const directions = wanted.filter((d) => present.has(d));
  if (directions.length === 0) {
    throw new CsvFormatError(
      `no rows for direction filter '${direction}' (CSV has: ${[...present].sort().join(", ") || "none"})`
    );
  }

  const outDir = path.dirname(outPrefix);
  if (outDir && outDir !== ".") {
    fs.mkdirSync(outDir, { recursive: true });
  }

  const written: string[] = [];
  for (const dir of directions) {
    for (const metric of METRICS) {
      const svg = lineChartSvg({
        title: `${dir} ${METRIC_FIELDS[metric].label}`,
        xLabel: "terrestrial UE count",
        yLabel: `${METRIC_FIELDS[metric].label} (bps/Hz)`,
        series: seriesForPanel(rows, dir, metric),
      });
      const file = `${outPrefix}_${dir}_${metric}.svg`;
      fs.writeFileSync(file, svg);
      written.push(file);
    }
  }
  return written;
}
