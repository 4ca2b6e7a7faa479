#!/usr/bin/env node
/**
 * Entry point. Either replay mode (no ML runtime) or graph-model mode:
 *
 *   detbench-adapter --replay <dir> [--threshold 0.01]
 *   detbench-adapter --model <dir> --labels <path> [--threshold 0.01]
 *
 * An unloadable model exits nonzero before serving a single request.
 */

import { parseArgs } from "node:util";
import { serve } from "./protocol.js";
import { ReplayDetector } from "./replay.js";
import { TfModelDetector } from "./tfmodel.js";
import { Detector } from "./types.js";

async function main(): Promise<number> {
  const { values } = parseArgs({
    options: {
      replay: { type: "string" },
      model: { type: "string" },
      labels: { type: "string" },
      threshold: { type: "string", default: "0.01" },
      "inject-malformed": { type: "string" },
    },
  });

  const threshold = Number(values.threshold);
  if (!(threshold > 0 && threshold <= 1)) {
    console.error(`threshold must be in (0, 1], got ${values.threshold}`);
    return 2;
  }
  if (!values.replay === !values.model) {
    console.error("exactly one of --replay <dir> or --model <path> is required");
    return 2;
  }

  let detector: Detector;
  try {
    detector = values.replay
      ? new ReplayDetector(values.replay)
      : await TfModelDetector.create(values.model as string, values.labels);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }

  return serve(detector, {
    threshold,
    injectMalformed: values["inject-malformed"],
  });
}

main().then(
  (code) => process.exit(code),
  (err) => {
    console.error(err instanceof Error ? err.stack ?? err.message : String(err));
    process.exit(1);
  },
);
