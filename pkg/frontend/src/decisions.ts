/**
 * Client-side detection rule, kept byte-for-byte equivalent to the server:
 * a distortion is detected when its score on the 0..100 scale is strictly
 * above the detection threshold DT.
 *
 * The DT slider re-derives decisions from cached scores with this function
 * instead of calling the server; the parity test pins the equivalence.
 */
export function decideScores(
  scores: Record<string, number>,
  dt: number
): Record<string, boolean> {
  const out: Record<string, boolean> = {};
  for (const [distortion, score] of Object.entries(scores)) {
    out[distortion] = score * 100 > dt;
  }
  return out;
}

/** Score as shown on the bars and compared against DT. */
export function scorePercent(score: number): number {
  return score * 100;
}
