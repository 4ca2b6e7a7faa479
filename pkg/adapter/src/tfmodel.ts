/**
 * Real-inference detector wrapping a TensorFlow.js graph model (the tfjs
 * conversion of a frozen detection graph). The runtime and the PNG codec
 * are optional dependencies loaded lazily; any load failure aborts before
 * serving starts.
 *
 * Expected model signature (standard detection-API exports):
 *   input:  [1, H, W, 3] uint8/int32 image tensor
 *   output: detection_boxes [1, N, 4] normalized (ymin, xmin, ymax, xmax),
 *           detection_scores [1, N], detection_classes [1, N]
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { LabelMap, parseLabelMap } from "./labels.js";
import { DetectResult, Detection, Detector, OomError } from "./types.js";

type TfModule = typeof import("@tensorflow/tfjs");

function fileSystemHandler(modelDir: string) {
  return {
    load: async () => {
      const modelJson = JSON.parse(fs.readFileSync(path.join(modelDir, "model.json"), "utf-8"));
      const manifest: Array<{ paths: string[]; weights: unknown[] }> = modelJson.weightsManifest ?? [];
      const weightSpecs = manifest.flatMap((group) => group.weights);
      const shards = manifest.flatMap((group) => group.paths);
      const buffers = shards.map((shard) => fs.readFileSync(path.join(modelDir, shard)));
      const weightData = new Uint8Array(Buffer.concat(buffers)).buffer;
      return {
        modelTopology: modelJson.modelTopology,
        format: modelJson.format,
        generatedBy: modelJson.generatedBy,
        convertedBy: modelJson.convertedBy,
        signature: modelJson.signature,
        weightSpecs,
        weightData,
      };
    },
  };
}

export class TfModelDetector implements Detector {
  private constructor(
    private readonly tf: TfModule,
    private readonly model: import("@tensorflow/tfjs").GraphModel,
    private readonly labels: LabelMap,
    private readonly decodePng: (data: Buffer) => { width: number; height: number; data: Buffer },
  ) {}

  static async create(modelPath: string, labelsPath: string | undefined): Promise<TfModelDetector> {
    let tf: TfModule;
    let pngjs: typeof import("pngjs");
    try {
      tf = await import("@tensorflow/tfjs");
    } catch {
      throw new Error("TensorFlow.js runtime is not installed (npm install @tensorflow/tfjs)");
    }
    try {
      pngjs = await import("pngjs");
    } catch {
      throw new Error("PNG codec is not installed (npm install pngjs)");
    }
    const dir = modelPath.endsWith("model.json") ? path.dirname(modelPath) : modelPath;
    if (!fs.existsSync(path.join(dir, "model.json"))) {
      throw new Error(`no model.json under ${dir}`);
    }
    const model = await tf.loadGraphModel(fileSystemHandler(dir) as never);
    const labels: LabelMap = labelsPath
      ? parseLabelMap(fs.readFileSync(labelsPath, "utf-8"))
      : new Map();
    const decodePng = (data: Buffer) => pngjs.PNG.sync.read(data);
    return new TfModelDetector(tf, model, labels, decodePng);
  }

  async detect(imagePath: string): Promise<DetectResult> {
    if (!fs.existsSync(imagePath)) {
      throw new Error(`image not found: ${imagePath}`);
    }
    const png = this.decodePng(fs.readFileSync(imagePath));
    const { width, height } = png;
    const rgb = new Int32Array(width * height * 3);
    for (let i = 0; i < width * height; i++) {
      rgb[i * 3] = png.data[i * 4];
      rgb[i * 3 + 1] = png.data[i * 4 + 1];
      rgb[i * 3 + 2] = png.data[i * 4 + 2];
    }

    const tf = this.tf;
    const input = tf.tensor4d(rgb, [1, height, width, 3], "int32");
    try {
      const started = process.hrtime.bigint();
      const outputs = await this.model.executeAsync(input);
      const elapsed = Number(process.hrtime.bigint() - started) / 1e9;
      const tensors = Array.isArray(outputs) ? outputs : [outputs];
      const named = this.pickOutputs(tensors);
      const boxes = (await named.boxes.data()) as Float32Array;
      const scores = (await named.scores.data()) as Float32Array;
      const classes = (await named.classes.data()) as Float32Array;
      tensors.forEach((t) => t.dispose());

      const detections: Detection[] = [];
      for (let i = 0; i < scores.length; i++) {
        if (scores[i] <= 0) continue;
        const classId = Math.round(classes[i]);
        detections.push({
          category: this.labels.get(classId) ?? `class-${classId}`,
          confidence: scores[i],
          xmin: boxes[i * 4 + 1] * width,
          ymin: boxes[i * 4] * height,
          xmax: boxes[i * 4 + 3] * width,
          ymax: boxes[i * 4 + 2] * height,
        });
      }
      return { timeSeconds: Math.max(elapsed, 1e-9), detections };
    } catch (err) {
      const message = err instanceof Error ? err.message.toLowerCase() : "";
      if (err instanceof RangeError || message.includes("out of memory") || message.includes("allocation failed")) {
        throw new OomError(err instanceof Error ? err.message : String(err));
      }
      throw err;
    } finally {
      input.dispose();
    }
  }

  private pickOutputs(tensors: Array<import("@tensorflow/tfjs").Tensor>) {
    // Prefer the rank/shape signature: boxes are [., N, 4], scores and
    // classes [., N]; classes carry integral values.
    const boxes = tensors.find((t) => t.shape[t.shape.length - 1] === 4 && t.rank >= 2);
    const flat = tensors.filter((t) => t !== boxes && t.rank <= 2);
    if (!boxes || flat.length < 2) {
      throw new Error("model outputs do not look like a detection signature");
    }
    return { boxes, scores: flat[0], classes: flat[1] };
  }
}
