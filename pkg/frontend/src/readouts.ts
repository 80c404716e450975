/**
 * Parameter readout panel. Values are shown verbatim from the engine
 * broadcast (String(value), no rounding and no client-side recompute),
 * so the panel and the engine can never disagree.
 */
import { StateMessage, WandReadout } from './messages';

const FIELDS: Array<keyof WandReadout> = [
  'x',
  'y',
  'z',
  'active',
  'radius',
  'freq_hz',
  'amp',
  'cutoff_hz',
  'rt60_s',
];

export function readoutLines(state: StateMessage): string[] {
  const lines: string[] = [];
  for (const wand of state.wands) {
    const name = wand.side === 'L' ? 'left' : 'right';
    for (const field of FIELDS) {
      lines.push(`${name}.${field} = ${String(wand[field])}`);
    }
  }
  lines.push(`overlap = ${String(state.overlap)}`);
  lines.push(`nan_resets = ${String(state.diag.nan_resets)}`);
  lines.push(`dropped_frames = ${String(state.diag.dropped_frames)}`);
  return lines;
}

export class ReadoutPanel {
  constructor(private readonly root: HTMLElement) {}

  update(state: StateMessage): void {
    this.root.textContent = readoutLines(state).join('\n');
  }
}
