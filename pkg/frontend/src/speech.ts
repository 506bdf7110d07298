// Browser-native speech capture, used only when the engine exists. Audio
// never leaves the browser; the server only ever receives text.

export interface SpeechCapture {
  start(): void;
  stop(): void;
}

interface RecognitionLike {
  lang: string;
  interimResults: boolean;
  onresult: ((event: { results: ArrayLike<ArrayLike<{ transcript: string }>> }) => void) | null;
  onend: (() => void) | null;
  start(): void;
  stop(): void;
}

export function createSpeechCapture(
  onTranscript: (text: string) => void,
  windowLike: typeof globalThis = globalThis,
): SpeechCapture | null {
  const ctor =
    (windowLike as Record<string, unknown>)['SpeechRecognition'] ??
    (windowLike as Record<string, unknown>)['webkitSpeechRecognition'];
  if (typeof ctor !== 'function') {
    return null; // no speech support: typed answers only, not an error
  }
  const recognition = new (ctor as new () => RecognitionLike)();
  recognition.lang = 'en-CA';
  recognition.interimResults = false;
  recognition.onresult = (event) => {
    const pieces: string[] = [];
    for (let i = 0; i < event.results.length; i += 1) {
      pieces.push(event.results[i][0].transcript);
    }
    onTranscript(pieces.join(' '));
  };
  return {
    start: () => recognition.start(),
    stop: () => recognition.stop(),
  };
}
