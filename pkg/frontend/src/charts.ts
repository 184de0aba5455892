// Small canvas renderers: a stacked census area chart and a multi-line
// chart. Rendering degrades to a no-op where no 2d context exists (jsdom),
// so the data path stays testable headlessly.

export interface LineSpec {
  label: string;
  color: string;
  values: number[];
}

function context(canvas: HTMLCanvasElement): CanvasRenderingContext2D | null {
  try {
    return canvas.getContext("2d");
  } catch {
    return null;
  }
}

function scale(values: number[], max: number, height: number): number[] {
  return values.map((v) => height - (v / max) * height);
}

export function drawLines(
  canvas: HTMLCanvasElement,
  days: number[],
  lines: LineSpec[],
  maxY?: number,
): void {
  const ctx = context(canvas);
  if (!ctx || days.length === 0) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const top = maxY ?? Math.max(1, ...lines.flatMap((l) => l.values));
  const dx = width / Math.max(1, days.length - 1);
  for (const line of lines) {
    const ys = scale(line.values, top, height - 4);
    ctx.strokeStyle = line.color;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ys.forEach((y, i) => {
      if (i === 0) ctx.moveTo(0, y + 2);
      else ctx.lineTo(i * dx, y + 2);
    });
    ctx.stroke();
  }
}

export function drawStack(
  canvas: HTMLCanvasElement,
  days: number[],
  layers: LineSpec[],
): void {
  const ctx = context(canvas);
  if (!ctx || days.length === 0) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const n = days.length;
  const totals = new Array(n).fill(0);
  for (const layer of layers) {
    for (let i = 0; i < n; i++) totals[i] += layer.values[i];
  }
  const top = Math.max(1, ...totals);
  const dx = width / Math.max(1, n - 1);
  const base = new Array(n).fill(0);
  for (const layer of layers) {
    ctx.fillStyle = layer.color;
    ctx.beginPath();
    for (let i = 0; i < n; i++) {
      const y = height - ((base[i] + layer.values[i]) / top) * height;
      if (i === 0) ctx.moveTo(0, y);
      else ctx.lineTo(i * dx, y);
    }
    for (let i = n - 1; i >= 0; i--) {
      ctx.lineTo(i * dx, height - (base[i] / top) * height);
    }
    ctx.closePath();
    ctx.fill();
    for (let i = 0; i < n; i++) base[i] += layer.values[i];
  }
}
