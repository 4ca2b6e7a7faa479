/**
 * The wire protocol loop.
 *
 * One request is in flight at a time; every response terminates with END
 * and responses are never interleaved. Detections below the configured
 * score threshold are never emitted.
 *
 *   harness -> adapter:  DETECT <image-path>     |  QUIT
 *   adapter -> harness:  TIME <seconds> [DET ...]* END
 *                        OOM END  |  ERR <message> END
 */

import * as path from "node:path";
import * as readline from "node:readline";
import { Detector, Detection, OomError } from "./types.js";

export interface ServeOptions {
  threshold: number;
  /** Test aid: emit one malformed line for this image stem (conformance suites). */
  injectMalformed?: string;
  input?: NodeJS.ReadableStream;
  output?: NodeJS.WritableStream;
}

function formatDet(d: Detection): string {
  return `DET ${d.category} ${d.confidence} ${d.xmin} ${d.ymin} ${d.xmax} ${d.ymax}`;
}

function isAllocationFailure(err: unknown): boolean {
  if (err instanceof OomError) return true;
  if (err instanceof RangeError) return true;
  const message = err instanceof Error ? err.message.toLowerCase() : "";
  return message.includes("out of memory") || message.includes("allocation failed");
}

export async function serve(detector: Detector, opts: ServeOptions): Promise<number> {
  const input = opts.input ?? process.stdin;
  const output = opts.output ?? process.stdout;
  const write = (line: string) => output.write(line + "\n");
  const rl = readline.createInterface({ input, terminal: false });

  for await (const raw of rl) {
    const line = raw.trim();
    if (line.length === 0) continue;
    if (line === "QUIT") {
      rl.close();
      return 0;
    }
    if (!line.startsWith("DETECT ")) {
      write(`ERR unknown command: ${line.split(/\s+/)[0]}`);
      write("END");
      continue;
    }
    const imagePath = line.slice("DETECT ".length).trim();
    const stem = path.parse(imagePath).name;
    try {
      const result = await detector.detect(imagePath);
      write(`TIME ${Math.max(result.timeSeconds, 1e-9)}`);
      if (opts.injectMalformed === stem) {
        write("DETX deliberately malformed line");
      }
      for (const det of result.detections) {
        if (det.confidence >= opts.threshold) {
          write(formatDet(det));
        }
      }
      write("END");
    } catch (err) {
      if (isAllocationFailure(err)) {
        write("OOM");
      } else {
        const message = err instanceof Error ? err.message : String(err);
        write(`ERR ${message.replace(/\s+/g, " ").trim()}`);
      }
      write("END");
    }
  }
  return 0;
}
