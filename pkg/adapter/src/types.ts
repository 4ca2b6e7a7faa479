/** Shared adapter types. */

export interface Detection {
  category: string;
  confidence: number;
  xmin: number;
  ymin: number;
  xmax: number;
  ymax: number;
}

export interface DetectResult {
  /** Duration of the detection phase only, in seconds (always > 0). */
  timeSeconds: number;
  detections: Detection[];
}

export interface Detector {
  detect(imagePath: string): Promise<DetectResult>;
}

/** Raised when the underlying runtime exhausts its allocator. */
export class OomError extends Error {}
