import * as fs from "fs";
import Papa from "papaparse";

export const REQUIRED_COLUMNS = [
  "scheme",
  "direction",
  "n_ues",
  "n_drops",
  "uav_rate_mean",
  "uav_rate_se",
  "terr_rate_mean",
  "terr_rate_se",
  "net_rate_mean",
  "net_rate_se",
] as const;

export interface SweepRow {
  scheme: number;
  direction: string;
  nUes: number;
  uavMean: number;
  uavSe: number;
  terrMean: number;
  terrSe: number;
  netMean: number;
  netSe: number;
}

export class CsvFormatError extends Error {}

function parseNumber(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw === undefined || raw === "" || Number.isNaN(value)) {
    throw new CsvFormatError(`row ${line}: column '${column}' is not a number: '${raw}'`);
  }
  return value;
}

export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new CsvFormatError(`CSV parse error: ${first.message} (row ${first.row})`);
  }
  const header = parsed.meta.fields ?? [];
  for (const column of REQUIRED_COLUMNS) {
    if (!header.includes(column)) {
      throw new CsvFormatError(`missing required column '${column}'`);
    }
  }
  return parsed.data.map((raw, i) => ({
    scheme: parseNumber(raw.scheme, "scheme", i + 2),
    direction: raw.direction,
    nUes: parseNumber(raw.n_ues, "n_ues", i + 2),
    uavMean: parseNumber(raw.uav_rate_mean, "uav_rate_mean", i + 2),
    uavSe: parseNumber(raw.uav_rate_se, "uav_rate_se", i + 2),
    terrMean: parseNumber(raw.terr_rate_mean, "terr_rate_mean", i + 2),
    terrSe: parseNumber(raw.terr_rate_se, "terr_rate_se", i + 2),
    netMean: parseNumber(raw.net_rate_mean, "net_rate_mean", i + 2),
    netSe: parseNumber(raw.net_rate_se, "net_rate_se", i + 2),
  }));
}

export function loadSweepCsv(path: string): SweepRow[] {
  let text: string;
  try {
    text = fs.readFileSync(path, "utf-8");
  } catch (err) {
    throw new CsvFormatError(`cannot read CSV '${path}': ${(err as Error).message}`);
  }
  return parseSweepCsv(text);
}
