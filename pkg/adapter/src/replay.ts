/**
 * Replay detector: answers each request from a recorded detection file,
 * <dir>/<image-stem>.txt, one `category confidence xmin ymin xmax ymax`
 * record per line ('#' comments ignored). Needs no ML runtime at all.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { DetectResult, Detection, Detector } from "./types.js";

export function parseDetectionLine(line: string, lineno: number): Detection {
  const fields = line.split(/\s+/);
  if (fields.length !== 6) {
    throw new Error(`detection line ${lineno}: expected 6 fields, got ${fields.length}`);
  }
  const [category, conf, xmin, ymin, xmax, ymax] = fields;
  const det: Detection = {
    category,
    confidence: Number(conf),
    xmin: Number(xmin),
    ymin: Number(ymin),
    xmax: Number(xmax),
    ymax: Number(ymax),
  };
  for (const value of [det.confidence, det.xmin, det.ymin, det.xmax, det.ymax]) {
    if (!Number.isFinite(value)) {
      throw new Error(`detection line ${lineno}: non-numeric field in ${JSON.stringify(line)}`);
    }
  }
  if (det.confidence < 0 || det.confidence > 1) {
    throw new Error(`detection line ${lineno}: confidence ${det.confidence} outside [0, 1]`);
  }
  if (det.xmax < det.xmin || det.ymax < det.ymin) {
    throw new Error(`detection line ${lineno}: inverted box`);
  }
  return det;
}

export function parseDetections(text: string): Detection[] {
  const detections: Detection[] = [];
  text.split("\n").forEach((raw, index) => {
    const line = raw.trim();
    if (line.length === 0 || line.startsWith("#")) return;
    detections.push(parseDetectionLine(line, index + 1));
  });
  return detections;
}

export class ReplayDetector implements Detector {
  constructor(private readonly directory: string) {
    if (!fs.existsSync(directory) || !fs.statSync(directory).isDirectory()) {
      throw new Error(`replay directory not found: ${directory}`);
    }
  }

  async detect(imagePath: string): Promise<DetectResult> {
    const stem = path.parse(imagePath).name;
    const recordPath = path.join(this.directory, `${stem}.txt`);
    const started = process.hrtime.bigint();
    if (!fs.existsSync(recordPath)) {
      throw new Error(`no recorded detections for ${stem}`);
    }
    const detections = parseDetections(fs.readFileSync(recordPath, "utf-8"));
    const elapsed = Number(process.hrtime.bigint() - started) / 1e9;
    return { timeSeconds: Math.max(elapsed, 1e-9), detections };
  }
}
