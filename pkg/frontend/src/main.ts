import { ChatApi } from "./api.js";
import { createChatApp } from "./ui.js";

function bootstrap(): void {
  const root = document.getElementById("app");
  if (root !== null) {
    createChatApp(root, new ChatApi());
  }
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", bootstrap);
} else {
  bootstrap();
}
